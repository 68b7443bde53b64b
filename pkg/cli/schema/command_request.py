from typing import Any, Literal

from pydantic import BaseModel, Field

Subcommand = Literal["bound", "compare", "verify", "simulate", "select"]
OutputFormat = Literal["json", "csv", "text"]


class CommandRequest(BaseModel):
    """A parsed command line invocation."""

    subcommand: Subcommand = Field(
        description="Which operation to run.",
        examples=["bound"],
    )
    parameters: dict[str, Any] = Field(
        description="Subcommand flags, already converted to numbers where applicable.",
        default={},
        examples=[{"kind": "kl-upper", "n": 100, "p": 0.5, "t": 0.1}],
    )
    output_format: OutputFormat | None = Field(
        description="Document format. None selects the subcommand default.",
        default=None,
        examples=["json"],
    )
    output: str | None = Field(
        description="Write the document to this path instead of stdout.",
        default=None,
    )

    def get(self, key: str, default: Any = None) -> Any:
        value = self.parameters.get(key)
        return default if value is None else value
