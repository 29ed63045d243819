# coding=utf-8


class FocalStackError(Exception):
    def __init__(self, message):
        self.message = message

    def __str__(self):
        return "%s: %s" % (type(self).__name__, self.message)


class ConfigError(FocalStackError):
    def __init__(self, key, message):
        self.key = key
        self.message = message

    def __str__(self):
        return "ConfigError(key=%s): %s" % (self.key, self.message)


class UsageError(FocalStackError):
    pass


class RealImageError(FocalStackError):
    pass


class OpticsDomainError(FocalStackError):
    pass


class ResolutionError(FocalStackError):
    pass


class ExtentOverflowError(FocalStackError):
    pass


class DegenerateBlurError(FocalStackError):
    pass


class NumericalFailureError(FocalStackError):
    def __init__(self, iteration, message):
        self.iteration = iteration
        self.message = message

    def __str__(self):
        return "NumericalFailureError(iteration=%s): %s" % (self.iteration, self.message)


class DegenerateCalibrationError(FocalStackError):
    pass


class PsdRangeError(FocalStackError):
    pass


class EmptyTraceError(FocalStackError):
    pass


class NoSpotError(FocalStackError):
    pass


class NoLineError(FocalStackError):
    pass


class DegenerateFitError(FocalStackError):
    pass


class DimensionMismatchError(FocalStackError):
    pass


class BadMagicError(FocalStackError):
    pass


class NonFiniteDepthError(FocalStackError):
    pass
