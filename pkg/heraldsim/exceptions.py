"""Exceptions raised by heraldsim."""


class HeraldsimException(Exception):
    """Base exception for heraldsim errors."""

    def __init__(self, message: str):
        """
        Base exception for heraldsim errors.

        Parameters
        ----------
        message : str
            The error message

        Attributes
        ----------
        message : str
            The error message
        """
        super().__init__(message)
        self.message = message


class InvalidParameterException(HeraldsimException, ValueError):
    """Exception for user supplied parameters that break a precondition."""


class UnphysicalStateException(HeraldsimException):
    """Exception for covariance matrices that do not describe a quantum state."""


class ZeroProbabilityException(HeraldsimException):
    """Exception for heralding patterns that can never be observed."""


class ConvergenceException(HeraldsimException):
    """Exception for iterative refinements that did not reach their tolerance."""

    def __init__(self, message: str, residual: float = float("nan")):
        """
        Exception for iterative refinements that did not reach their tolerance.

        Parameters
        ----------
        message : str
            The error message
        residual : float, optional
            The last residual reached before giving up, by default nan
        """
        super().__init__(message)
        self.residual = residual


class DatabaseException(HeraldsimException):
    """Exception for results database errors."""
