"""Exception types shared across the package.

Everything derives from HandoffLabError so callers can catch broadly.
The CLI maps these onto exit codes; library users get ordinary
ValueError/LookupError semantics.
"""


class HandoffLabError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(HandoffLabError, ValueError):
    """A parameter or parameter combination violates a stated invariant."""


class OutOfDomainError(HandoffLabError, ValueError):
    """An evaluation point lies outside the domain of the requested quantity."""


class NotBracketedError(HandoffLabError, ValueError):
    """A root-finding target is not bracketed by the search interval."""


class UnknownBaseStationError(HandoffLabError, LookupError):
    """A base-station identifier does not appear in the topology."""


class UnsupportedHandoffTypeError(HandoffLabError, ValueError):
    """The delay profile has no delay configured for the requested handoff type."""


class ScenarioParseError(HandoffLabError, ValueError):
    """Scenario or sweep text that cannot be parsed at all."""


class ScenarioValidationError(HandoffLabError, ValueError):
    """Well-formed scenario text with invalid content; carries the key path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
