import logging
import time
from collections import namedtuple
from enum import Enum

import numpy as np
from sympy import QQ

from grpcert import config
from grpcert.character.class_function import ClassFunction
from grpcert.character.cyclotomic import Cyclotomic
from grpcert.group.subgroups import SubgroupRecord

_logger = logging.getLogger(__name__)

CHECK = namedtuple("CHECK", ["name", "status", "witness"])


class CheckStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    OBSERVATION = "observation"


def jsonable(value):
    """
    Convert witnesses and report data into plain JSON types.
    """
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (Cyclotomic, ClassFunction)):
        return value.to_json()
    if isinstance(value, SubgroupRecord):
        return {"order": value.order, "members": value.members.tolist(), "class_id": value.conjugacy_class_id}
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.integer, np.bool_)):
        return value.item()
    if QQ.of_type(value):
        return int(value.numerator) if value.denominator == 1 else str(value)
    if hasattr(value, "to_json"):
        return value.to_json()
    return value


class VerificationReport(object):
    """
    Outcome of verifying one claim on one group: every check with its status and witness, the external steps
    that were assumed rather than checked, free form data and the elapsed time.
    """

    def __init__(self, claim, group_label, parameters=None):
        self.claim = claim
        self.group_label = group_label
        self.parameters = dict(parameters or {})
        self.checks = []
        self.assumptions = []
        self.data = {}
        self.timing = {}
        self._start = time.perf_counter()

    def add_check(self, name, status, witness=None):
        """
        Record a check. A failing check needs a witness.
        """
        if status == CheckStatus.FAIL and witness is None:
            raise ValueError("Failing check '%s' needs a witness." % name)
        self.checks.append(CHECK(name, status, witness))
        if status == CheckStatus.FAIL:
            _logger.warning("Check '%s' of %s on %s failed: %s" % (name, self.claim, self.group_label, witness))
        return status

    def check(self, name, condition, witness=None):
        """
        Record pass or fail from a boolean; the witness is kept for both outcomes.
        """
        return self.add_check(name, CheckStatus.PASS if condition else CheckStatus.FAIL,
                              witness if witness is not None or condition else {"condition": False})

    def observe(self, name, witness=None):
        return self.add_check(name, CheckStatus.OBSERVATION, witness)

    def observe_table(self, table):
        """
        Record an observation when the exact orthogonality check of a character table was skipped.
        """
        if not table.orthogonality_verified:
            self.observe("orthogonality of the %s table not verified" % table.group.label,
                         {"classes": len(table), "limit": config.character_table_verify_class_limit})

    def assume(self, statement):
        self.assumptions.append(statement)

    def finish(self):
        self.timing["seconds"] = time.perf_counter() - self._start
        return self

    @property
    def failures(self):
        return [check for check in self.checks if check.status == CheckStatus.FAIL]

    @property
    def observations(self):
        return [check for check in self.checks if check.status == CheckStatus.OBSERVATION]

    @property
    def passed(self):
        return not self.failures

    def counts(self):
        return {status.value: sum(1 for check in self.checks if check.status == status) for status in CheckStatus}

    def to_dict(self, include_timing=True):
        result = {"claim": self.claim,
                  "group": self.group_label,
                  "parameters": jsonable(self.parameters),
                  "checks": [{"name": check.name, "status": check.status.value, "witness": jsonable(check.witness)}
                             for check in self.checks],
                  "assumptions": list(self.assumptions),
                  "data": jsonable(self.data),
                  "summary": dict(self.counts(), passed=self.passed)}
        if include_timing:
            result["timing"] = jsonable(self.timing)
        return result

    def __repr__(self):
        counts = self.counts()
        return "VerificationReport(%s on %s: %d pass, %d fail, %d observation)" % (
            self.claim, self.group_label, counts["pass"], counts["fail"], counts["observation"])
