"""Exception taxonomy shared across modules; the CLI maps these to exit codes."""


class HypothesisRejected(ValueError):
    """Input fails a structural hypothesis (not convenient, wrong degrees, ...)."""


class CertificationFailure(RuntimeError):
    """A certification margin was violated; carries the witness in args."""


class NonConvergence(RuntimeError):
    """A numeric iteration (refinement, tracing, stabilization) did not converge."""
