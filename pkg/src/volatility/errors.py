from typing import Optional


class SeriesFormatError(ValueError):
    """
    Raised when an input series cannot be read or violates the series contract.
    """
    def __init__(self, reason: str, path: Optional[str] = None):
        message = f"{path}: {reason}" if path else reason
        super().__init__(message)
        self.reason = reason
        self.path = path


class DivergenceError(RuntimeError):
    """
    Raised when a Gibbs block leaves the chain in a non-finite or invalid state.
    """
    def __init__(self, iteration: int, block: str, detail: str = "", run_id: Optional[str] = None):
        message = f"Chain diverged at iteration {iteration} in block '{block}'"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.iteration = iteration
        self.block = block
        self.detail = detail
        self.run_id = run_id
