"""Digital-analog compilation and simulation of Fermi-Hubbard dynamics on a
charge-qubit chain with SQUID couplers."""

from daqc.errors import ResourceLimitError, StepSizeError, ValidationError

__all__ = ["ResourceLimitError", "StepSizeError", "ValidationError"]
__version__ = "0.1.0"
