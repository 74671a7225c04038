# Rendering defaults
class RenderDefaults:
    MAX_EXEMPLARS = 8
    MAX_CHARS_PER_STATE = 400
    INCLUDE_FAILURES = True


# Section layout
class RenderLayout:
    HEADER = "## Procedural memory"
    EMPTY_SENTINEL = "(no relevant past experience)"
    FEATURE_SEPARATOR = "; "
    ELLIPSIS = "..."
    EMPTY_STATE = "(empty)"
    SUCCESS_LABEL = "success"
    FAILURE_LABEL = "failure"
