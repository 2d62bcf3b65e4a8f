"""Gateway request errors, each mapped to an HTTP status."""


class GatewayError(Exception):
    http_status = 500

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


class RouteNotFoundError(GatewayError):
    http_status = 404


class MethodNotAllowedError(GatewayError):
    http_status = 405


class UnauthorizedError(GatewayError):
    http_status = 401


class BadRequestError(GatewayError):
    http_status = 400


class UpstreamFetchFailedError(GatewayError):
    http_status = 502


class NoHealthyWorkerError(GatewayError):
    http_status = 503
