"""Exception hierarchy shared across the pipeline.

Errors are grouped by the stage that raises them; everything derives from
CraftError so callers can catch pipeline failures in one place without
swallowing programming errors.
"""


class CraftError(Exception):
    """Base class for all craftpipe errors."""


# --- GLB container -----------------------------------------------------------

class GlbError(CraftError):
    """Base class for GLB container errors."""


class BadMagic(GlbError):
    """First four bytes of the container are not 'glTF'."""


class UnsupportedVersion(GlbError):
    """Container version is not 2."""


class ChunkMisaligned(GlbError):
    """Chunk lengths are not 4-byte aligned or overrun the container."""


class MalformedJson(GlbError):
    """The JSON chunk does not parse."""


class DanglingReference(GlbError):
    """An index (accessor, bufferView, node, ...) points out of range."""


class UnsupportedFeature(GlbError):
    """Sparse accessors, Draco compression, or non-binary glTF input."""


class InvariantViolation(CraftError):
    """A document or bundle was mutated into an inconsistent state."""


# --- scaling -----------------------------------------------------------------

class DegenerateGeometry(CraftError):
    """Model has no usable extent (flat or empty); cannot derive a scale."""


# --- interaction points ------------------------------------------------------

class DuplicateKind(CraftError):
    """More than one interaction point of the same kind."""


class MalformedExtension(CraftError):
    """Vendor extension JSON does not match the documented schema."""


# --- mesh budget -------------------------------------------------------------

class UnsupportedPrimitiveMode(CraftError):
    """Primitive topology is not triangles."""


class BudgetExceeded(CraftError):
    """Document violates the target platform profile."""

    def __init__(self, violations, report=None):
        super().__init__(f"budget exceeded: {', '.join(violations)}")
        self.violations = list(violations)
        self.report = report


class DecimationFailed(CraftError):
    """Triangle target unreachable without destroying the mesh."""


# --- behavior ----------------------------------------------------------------

class SchemaError(CraftError):
    """Behavior descriptor JSON does not match the schema."""

    def __init__(self, message, field_path=""):
        super().__init__(f"{field_path}: {message}" if field_path else message)
        self.field_path = field_path


class InvariantError(CraftError):
    """Behavior descriptor violates a numeric invariant (axis norm, period)."""


class UnsupportedPrimitive(CraftError):
    """Platform adapter has no script template for a motion primitive."""


# --- generative providers ----------------------------------------------------

class ProviderError(CraftError):
    """Provider call failed (network, HTTP 5xx, malformed reply)."""


class RateLimited(CraftError):
    """Provider or local limiter refused the call; retry later."""

    def __init__(self, retry_after_s=None):
        super().__init__(
            "rate limited" if retry_after_s is None
            else f"rate limited; retry after {retry_after_s:.3f}s"
        )
        self.retry_after_s = retry_after_s


class ContentRejected(CraftError):
    """Provider refused the content (safety filter); never retried."""


class InvalidModelReturned(CraftError):
    """Provider returned bytes that do not parse as a GLB."""


# --- platform gateway --------------------------------------------------------

class AuthFailed(CraftError):
    """Platform rejected the access token (401/403)."""


class PlatformRejected(CraftError):
    """Platform refused the upload (4xx with a reason)."""

    def __init__(self, reason, status=None):
        super().__init__(f"platform rejected upload: {reason}")
        self.reason = reason
        self.status = status


class TransportError(CraftError):
    """Timeout or 5xx after retries."""


# --- pipeline ----------------------------------------------------------------

class IllegalPhase(CraftError):
    """Requested operation is not allowed in the session's current phase."""

    def __init__(self, phase, allowed):
        super().__init__(
            f"operation not allowed in phase {phase}; requires one of {sorted(allowed)}"
        )
        self.phase = phase
        self.allowed = set(allowed)
