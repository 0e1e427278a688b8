

class InvalidConfigError(Exception):
    pass

class ProtocolViolationError(Exception):
    pass

class MetricError(Exception):
    pass

class ExperimentError(Exception):
    pass
