"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-contract input (bad node id, invalid path, ...)."""


class DomainError(ValueError):
    """A closed-form evaluator was asked about a case outside its domain."""


class ResourceGuardError(RuntimeError):
    """A brute-force search or exact solver exceeded its desk-scale guard."""


class GenerationError(RuntimeError):
    """Random network generation gave up after its bounded retries."""
