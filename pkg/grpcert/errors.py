class GroupCertError(ValueError):
    """
    Base of every domain error. The optional witness is a finite, JSON friendly description of what failed.
    """

    def __init__(self, message, witness=None):
        super(GroupCertError, self).__init__(message)
        self.witness = witness


class NotAGroup(GroupCertError):
    pass


class TooLarge(GroupCertError):
    pass


class BadSpec(GroupCertError):

    def __init__(self, message, position=None, witness=None):
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super(BadSpec, self).__init__(message, witness)
        self.position = position


class NoSuchQ(GroupCertError):
    pass


class Unclassifiable(GroupCertError):
    pass


class LiftFailure(GroupCertError):
    pass


class NotACharacter(GroupCertError):
    pass


class PreconditionFailed(GroupCertError):
    pass


class NoCaseMatches(GroupCertError):
    pass


class NonAbelianIsotropy(GroupCertError):
    pass


class RankExceedsTarget(GroupCertError):
    pass


class MissingAssignment(GroupCertError):
    pass


class NoSuitableCharacters(GroupCertError):
    pass


class BadGroup(GroupCertError):
    pass


class UnsupportedGroup(GroupCertError):
    pass


class NotSurjective(GroupCertError):
    pass


class NotEquivariant(GroupCertError):
    pass


class SearchExhausted(GroupCertError):
    pass


class UnexpectedHomology(GroupCertError):
    pass
