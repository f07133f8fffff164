"""Exception types shared across the package."""


class TexDeformError(Exception):
    """Base class for every error raised by this package."""


class ObjParseError(TexDeformError):
    """OBJ file could not be parsed; carries the offending line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class NonTriangleFaceError(ObjParseError):
    """A face record has more or fewer than three vertices."""


class MeshError(TexDeformError):
    """Mesh data violates a structural invariant."""


class IsolatedVertexError(MeshError):
    """A vertex has no incident face, so it has no one-ring."""

    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} has no incident face")
        self.vertex = vertex


class DegenerateFrameError(MeshError):
    """Local frame construction failed (zero normal or degenerate tangent)."""

    def __init__(self, vertex, message):
        super().__init__(f"vertex {vertex}: {message}")
        self.vertex = vertex


class UnreachableVertexError(TexDeformError):
    """A vertex cannot be reached from a distance-field source."""

    def __init__(self, source, vertex):
        super().__init__(
            f"vertex {vertex} is unreachable from source {source}; mesh is disconnected"
        )
        self.source = source
        self.vertex = vertex


class DegenerateConfigurationError(TexDeformError):
    """Camera fit is singular (condition number above the limit)."""

    def __init__(self, message, vertex=None):
        super().__init__(message if vertex is None else f"vertex {vertex}: {message}")
        self.vertex = vertex


class SingularSystemError(TexDeformError):
    """A linear solve has no unique solution (typically a disconnected mesh)."""


class ContractViolationError(TexDeformError):
    """An operation was called outside its documented preconditions."""


class ImageFormatError(TexDeformError):
    """Texture image header could not be read."""


class CorrespondenceFormatError(TexDeformError):
    """Correspondence JSON violates the schema; carries the field path."""

    def __init__(self, field_path, message):
        super().__init__(f"{field_path}: {message}")
        self.field_path = field_path


class DuplicateVertexError(CorrespondenceFormatError):
    """The same mesh vertex appears in more than one correspondence pair."""

    def __init__(self, vertex, field_path="pairs"):
        super().__init__(field_path, f"duplicate vertex {vertex}")
        self.vertex = vertex


class PipelineError(TexDeformError):
    """Wraps an error from one solver stage with stage and iteration tags."""

    def __init__(self, stage, iteration, cause):
        super().__init__(f"stage '{stage}' failed at iteration {iteration}: {cause}")
        self.stage = stage
        self.iteration = iteration
        self.cause = cause
