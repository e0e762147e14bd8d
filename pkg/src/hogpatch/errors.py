"""Exception classes shared across the solver."""


class ConfigurationError(ValueError):
    """Bad geometry, shape mismatch, unknown option or broken topology."""


class UnphysicalStateError(ArithmeticError):
    """Non-positive density or pressure encountered in a zone or face state.

    ``location`` is the index of the first offending entry within the array
    that was being checked; ``context`` names the stage that produced it.
    """

    def __init__(self, message, location=None, context=None, step=None):
        self.location = location
        self.context = context
        self.step = step
        parts = [message]
        if context:
            parts.append(f"stage={context}")
        if location is not None:
            parts.append(f"index={tuple(int(i) for i in location)}")
        if step is not None:
            parts.append(f"step={step}")
        super().__init__(", ".join(parts))
