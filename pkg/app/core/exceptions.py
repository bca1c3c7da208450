"""Exception hierarchy for the KD coherence engine."""


class KDError(Exception):
	"""Base class for every error raised by the engine."""


class NormalizationError(KDError):
	pass


class DimensionError(KDError):
	pass


class StateError(KDError):
	"""Matrix is not Hermitian or not positive semidefinite."""


class BasisError(KDError):
	pass


class KrausError(KDError):
	pass


class MarginalError(KDError):
	pass


class OverlapError(KDError):
	pass


class MapError(KDError):
	pass


class ParamError(KDError, ValueError):
	pass


class NumericalError(KDError):
	"""Numerical procedure failed to deliver a trustworthy result."""


class IntegrationError(NumericalError):
	pass


class StepSizeError(NumericalError):
	pass
