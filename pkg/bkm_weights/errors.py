"""
Error hierarchy shared by every module.

Each error carries the process exit code the CLI maps it to:
2 for rejected input, 3 for an exhausted budget, 1 for a failed cross-check.
"""


class BkmError(Exception):
    exit_code = 2

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        data = {
            "error": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
        }
        if self.details:
            data["details"] = self.details
        return data


class InvalidInput(BkmError):
    pass


class RejectNotBkm(BkmError):
    def __init__(self, rule: str, message: str = ""):
        super().__init__(message or f"matrix violates rule: {rule}", rule=rule)
        self.rule = rule


class NotSymmetrizable(BkmError):
    pass


class NonIntegralDifference(BkmError):
    pass


class NotDominant(BkmError):
    pass


class NotFreeCase(BkmError):
    pass


class NotASolution(BkmError):
    pass


class PremiseFails(BkmError):
    pass


class HypothesisFails(BkmError):
    pass


class CaseNotCovered(BkmError):
    pass


class NotMaximal(BkmError):
    pass


class InvalidHole(BkmError):
    pass


class UnboundedWithoutBox(BkmError):
    pass


class CutoffTooLargeForBudget(BkmError):
    exit_code = 3


class CutoffTooLarge(BkmError):
    exit_code = 3


class AssertionFailed(BkmError):
    exit_code = 1
