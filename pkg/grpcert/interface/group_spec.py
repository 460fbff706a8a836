import json
import logging
from collections import namedtuple

from grpcert import config
from grpcert.errors import BadSpec
from grpcert.group.catalog import REFUSED_FAMILIES, build_catalog_group
from grpcert.group.finite_group import group_from_cayley_table, group_from_permutations

_logger = logging.getLogger(__name__)

GROUP_SPEC = namedtuple("GROUP_SPEC", ["head", "args", "position"])

# Families with integer arguments and how many of them (None: a comma separated list).
NUMERIC_FAMILIES = {"cyclic": 1, "extraspecial": 3, "modular": 2, "abelian": None}
# Families of two nested specs joined by "*".
BINARY_FAMILIES = ("product", "centralproduct")
# Families read from a JSON file.
FILE_FAMILIES = ("cayley", "perm")


class _Parser(object):
    """
    Recursive descent over: spec := head ":" arguments; products take spec "*" spec.
    """

    def __init__(self, text):
        self.text = text
        self.position = 0

    def _peek(self):
        return self.text[self.position] if self.position < len(self.text) else None

    def _expect(self, character):
        if self._peek() != character:
            found = "end of input" if self._peek() is None else "'%s'" % self._peek()
            raise BadSpec("Expected '%s' but found %s." % (character, found), self.position)
        self.position += 1

    def _word(self):
        start = self.position
        while self._peek() is not None and self._peek().isalpha():
            self.position += 1
        if start == self.position:
            raise BadSpec("Expected a family name.", start)
        return self.text[start:self.position], start

    def _integer(self):
        start = self.position
        while self._peek() is not None and self._peek().isdigit():
            self.position += 1
        if start == self.position:
            raise BadSpec("Expected an integer.", start)
        return int(self.text[start:self.position])

    def _path(self):
        start = self.position
        while self._peek() is not None and self._peek() != "*":
            self.position += 1
        if start == self.position:
            raise BadSpec("Expected a file path.", start)
        return self.text[start:self.position]

    def spec(self):
        head, start = self._word()
        self._expect(":")

        if head in REFUSED_FAMILIES:
            raise BadSpec("%s groups are p = 2 families and are not constructed." % head, start)

        if head in NUMERIC_FAMILIES:
            separator = "," if NUMERIC_FAMILIES[head] is None else ":"
            args = [self._integer()]
            while self._peek() == separator:
                self.position += 1
                args.append(self._integer())
            expected = NUMERIC_FAMILIES[head]
            if expected is not None and len(args) != expected:
                raise BadSpec("%s needs %d arguments, but %d were provided." % (head, expected, len(args)), start)
            return GROUP_SPEC(head, tuple(args), start)

        if head in BINARY_FAMILIES:
            left = self.spec()
            self._expect("*")
            right = self.spec()
            return GROUP_SPEC(head, (left, right), start)

        if head in FILE_FAMILIES:
            return GROUP_SPEC(head, (self._path(),), start)

        raise BadSpec("Unknown family '%s'." % head, start)

    def parse(self):
        spec = self.spec()
        if self.position != len(self.text):
            raise BadSpec("Unexpected trailing text '%s'." % self.text[self.position:], self.position)
        return spec


def parse_group_spec(text):
    """
    Parse a group spec, e.g. "extraspecial:3:5:3" or "product:extraspecial:3:3:3*cyclic:3".
    :return: GROUP_SPEC tree.
    :raise BadSpec: with the position of the first error.
    """
    if not isinstance(text, str) or not text:
        raise BadSpec("Group spec must be a non empty string, but %r was provided." % (text,))
    return _Parser(text.strip()).parse()


def format_group_spec(spec):
    """
    The text of a GROUP_SPEC; parse_group_spec(format_group_spec(s)) == s up to positions.
    """
    if spec.head in BINARY_FAMILIES:
        return "%s:%s*%s" % (spec.head, format_group_spec(spec.args[0]), format_group_spec(spec.args[1]))
    if spec.head == "abelian":
        return "abelian:%s" % ",".join(str(a) for a in spec.args)
    return "%s:%s" % (spec.head, ":".join(str(a) for a in spec.args))


def _load_json(path, fields):
    try:
        with open(path) as input_file:
            document = json.load(input_file)
    except (IOError, OSError) as error:
        raise BadSpec("Cannot read group file '%s': %s" % (path, error))
    except ValueError as error:
        raise BadSpec("Group file '%s' is not valid JSON: %s" % (path, error))

    missing = [field for field in fields if field not in document]
    if missing:
        raise BadSpec("Group file '%s' is missing the fields %s." % (path, missing))
    return document


def build_group(spec, order_cap=None):
    """
    Build the FiniteGroup of a parsed spec.
    :param spec: GROUP_SPEC.
    :param order_cap: Closure cap for permutation files. Default config.permutation_closure_order_cap.
    """
    if spec.head in BINARY_FAMILIES:
        left, right = (build_group(s, order_cap) for s in spec.args)
        return build_catalog_group(spec.head, [left, right])

    if spec.head == "cayley":
        path, = spec.args
        document = _load_json(path, ["order", "table"])
        if len(document["table"]) != document["order"]:
            raise BadSpec("Cayley file '%s' declares order %s but has %d rows."
                          % (path, document["order"], len(document["table"])))
        return group_from_cayley_table(document["table"], label=format_group_spec(spec))

    if spec.head == "perm":
        path, = spec.args
        document = _load_json(path, ["degree", "generators"])
        return group_from_permutations(document["degree"], document["generators"], label=format_group_spec(spec),
                                       order_cap=order_cap or config.permutation_closure_order_cap)

    group = build_catalog_group(spec.head, list(spec.args))
    _logger.debug("Built %s of order %d." % (format_group_spec(spec), group.order))
    return group
