"""Shared error type: domain failures carry a stable machine-readable code."""

from __future__ import annotations


class JacstabError(Exception):
    """Domain error with a stable ``code`` string and optional JSON-safe details."""

    def __init__(self, code: str, message: str, **details):
        super().__init__(message)
        self.code = code
        self.details = details

    def to_json_dict(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out
