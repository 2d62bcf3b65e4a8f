"""Errors raised by the service catalog, backends and face index."""


class CoreError(Exception):
    pass


class DuplicateRouteError(CoreError):
    pass


class InvalidDescriptorError(CoreError):
    pass


class UnknownRouteError(CoreError):
    pass


class UnknownBackendError(CoreError):
    pass


class EmptyInputError(CoreError):
    pass


class EmptyIndexError(CoreError):
    """Search attempted against a face index with no enrollments."""


class EmptyDatasetError(CoreError):
    pass
