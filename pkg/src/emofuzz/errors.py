"""Exception types shared across the package.

Each error carries the name of the module that raised it and the CLI exit
code it maps to, so the command line can print ``error: <module>: <detail>``.
"""


class EmofuzzError(Exception):
    module = "emofuzz"
    exit_code = 1


class SystemDefinitionError(EmofuzzError, ValueError):
    """Malformed membership function, variable, rule or system document."""

    module = "fuzzy_core"
    exit_code = 3


class EmptyAggregateError(EmofuzzError):
    """No rule fired, so the aggregated output has zero area."""

    module = "fuzzy_core"
    exit_code = 5


class EmotionParseError(EmofuzzError, ValueError):
    module = "emotion_model"
    exit_code = 3


class ParseError(EmofuzzError, ValueError):
    module = "timeline_io"
    exit_code = 3

    def __init__(self, detail: str, row: int | None = None):
        self.row = row
        super().__init__(detail if row is None else f"row {row}: {detail}")


class AlignmentError(EmofuzzError):
    module = "timeline_io"
    exit_code = 4


class FusionError(EmofuzzError):
    module = "fusion_pipeline"
    exit_code = 5


class AnalyticsError(EmofuzzError, ValueError):
    module = "analytics"
    exit_code = 5
