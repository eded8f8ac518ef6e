class ConfigError(Exception):
    """This exception is raised when an experiment config cannot be loaded or validated"""

    def __init__(self, source, reason):
        self.source = source
        self.reason = reason
        super().__init__(f"Invalid config {source}: {reason}")
