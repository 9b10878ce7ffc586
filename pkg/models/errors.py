class ModelError(Exception):
    pass


class ModelFileError(ModelError):
    """Syntax or content error in a model file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where = f"{where}{line}: "
        elif where:
            where = f"{where} "
        super().__init__(f"{where}{message}")
