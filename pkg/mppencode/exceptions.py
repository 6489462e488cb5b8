class InvalidGeometry(ValueError):
    def __init__(self, message, reason=None, feature_index=None):
        self._message = message
        if feature_index is not None:
            message = f"feature {feature_index}: {message}"
        super().__init__(message)
        self.reason = reason or message
        self.feature_index = feature_index

    def __reduce__(self):
        return type(self), (self._message, self.reason, self.feature_index)


class GeometryKindError(TypeError):
    pass


class DomainError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, byte_offset, message, expected=None):
        text = f"{message} at byte {byte_offset}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)
        self.byte_offset = byte_offset
        self.message = message
        self.expected = expected

    def __reduce__(self):
        return type(self), (self.byte_offset, self.message, self.expected)


class UnsupportedGeometryType(ValueError):
    pass


class InvalidGridConfiguration(ValueError):
    pass


class GridMismatch(ValueError):
    pass


class UnderdeterminedDecoding(ValueError):
    pass


class InconsistentEncoding(ValueError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual

    def __reduce__(self):
        return type(self), (self.args[0], self.residual)


class GeneratorError(RuntimeError):
    def __init__(self, kind, message):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self._message = message

    def __reduce__(self):
        return type(self), (self.kind, self._message)


class TrainingError(RuntimeError):
    def __init__(self, message, epoch=None, loss=None):
        self._message = message
        if epoch is not None:
            message = f"{message} (epoch {epoch}, loss {loss})"
        super().__init__(message)
        self.epoch = epoch
        self.loss = loss

    def __reduce__(self):
        return type(self), (self._message, self.epoch, self.loss)
