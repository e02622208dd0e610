"""Exception types shared across the package."""


class LeaderAgeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(LeaderAgeError, ValueError):
    """A parameter violates a model invariant (e.g. l > n, c <= 0)."""


class ModelDegenerateError(LeaderAgeError, ValueError):
    """The configuration has no steady state: followers never apply an
    update within a commit window (F_w(c) = 0), so follower staleness
    grows without bound."""


class UninitializedFollowerError(LeaderAgeError, RuntimeError):
    """A follower's age was requested before it ever applied an update."""
