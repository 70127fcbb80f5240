class SierpinskiError(Exception):
    pass


class ParameterError(SierpinskiError, ValueError):
    pass


class SizeLimitError(ParameterError):
    pass


class EnumerationLimitError(SierpinskiError):
    pass


class ConstructionError(SierpinskiError):
    """An explicit construction failed its checker."""
