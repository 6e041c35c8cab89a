"""Exception hierarchy shared by all netrecon modules."""


class NetreconError(Exception):
    """Base class for all netrecon errors."""


# --- netlist / bench format ---

class BenchSyntaxError(NetreconError):
    def __init__(self, message, line, column=0):
        super().__init__(f"line {line}, col {column}: {message}")
        self.line = line
        self.column = column


class MultipleDriversError(NetreconError):
    def __init__(self, net):
        super().__init__(f"net '{net}' has more than one driver")
        self.net = net


class UndrivenNetError(NetreconError):
    def __init__(self, net):
        super().__init__(f"net '{net}' is referenced but never driven")
        self.net = net


class CombinationalLoopError(NetreconError):
    def __init__(self, cycle):
        super().__init__("combinational loop through nets: " + " -> ".join(cycle))
        self.cycle = list(cycle)


class BadArityError(NetreconError):
    def __init__(self, gate, kind, expected, got):
        super().__init__(f"gate '{gate}' ({kind}) expects {expected} inputs, got {got}")
        self.gate = gate
        self.kind = kind
        self.expected = expected
        self.got = got


class NotACutPointError(NetreconError):
    def __init__(self, net):
        super().__init__(f"net '{net}' is neither a primary output nor a flip-flop data input")
        self.net = net


class PolicyConflictError(NetreconError):
    def __init__(self, naming_only, structural_only):
        super().__init__(
            "key-input policies disagree; naming-only=%s structural-only=%s"
            % (sorted(naming_only), sorted(structural_only))
        )
        self.naming_only = set(naming_only)
        self.structural_only = set(structural_only)


# --- lock ---

class TransformError(NetreconError):
    """Raised when a locking transform cannot be applied."""


class TooManyKeyGatesError(TransformError):
    def __init__(self, requested, eligible):
        super().__init__(f"requested {requested} key gates but only {eligible} eligible nets")
        self.requested = requested
        self.eligible = eligible


class DuplicateKeyNameError(TransformError):
    def __init__(self, name):
        super().__init__(f"key input name '{name}' already exists in the netlist")
        self.name = name


class NoEligibleConeError(TransformError):
    def __init__(self, width):
        super().__init__(f"no remaining logic cone with support <= {width}")
        self.width = width


class ConeOverlapError(TransformError):
    def __init__(self, gate):
        super().__init__(f"selected cones overlap at gate '{gate}'")
        self.gate = gate


class KeyMismatchError(NetreconError):
    def __init__(self, message):
        super().__init__(message)


# --- sim ---

class MissingAssignmentError(NetreconError):
    def __init__(self, net):
        super().__init__(f"frame input '{net}' has no assignment")
        self.net = net


class InterfaceMismatchError(NetreconError):
    def __init__(self, what, left, right):
        super().__init__(f"{what} differ: {sorted(left)} vs {sorted(right)}")
        self.what = what


class ExhaustiveTooLargeError(NetreconError):
    def __init__(self, k, limit):
        super().__init__(f"{k} frame inputs exceed the exhaustive limit of {limit}")
        self.k = k
        self.limit = limit


class SignatureLengthMismatchError(NetreconError):
    def __init__(self, len_a, len_b):
        super().__init__(f"signature lengths differ: {len_a} vs {len_b}")


# --- attack / cli ---

class EmptyLibraryError(NetreconError):
    def __init__(self, pi, po):
        super().__init__(
            f"no library candidate matches (pi={pi}, po={po}); the design library needs updating"
        )
        self.pi = pi
        self.po = po


class EmptyCutSetError(NetreconError):
    def __init__(self):
        super().__init__("cannot match an empty cut-point set")


class ConfigError(NetreconError):
    pass
