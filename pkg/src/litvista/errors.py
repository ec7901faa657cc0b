"""Exception hierarchy shared by all litvista modules."""

from __future__ import annotations


class VistaError(Exception):
    """Base class for every error raised by litvista."""


class InvalidGraph(VistaError):
    def __init__(self, doc_id: str, violations=()):
        self.doc_id = doc_id
        self.violations = list(violations)
        summary = "; ".join(f"{v.anchor_id}:{v.kind}" for v in self.violations[:5])
        super().__init__(f"graph {doc_id!r} is invalid ({summary})")


class InvalidGoldGraph(InvalidGraph):
    pass


class MalformedRow(VistaError):
    def __init__(self, line_no: int, reason: str, line: str = ""):
        self.line_no = line_no
        self.reason = reason
        self.line = line
        super().__init__(f"line {line_no}: {reason}: {line!r}")


class DuplicateId(VistaError):
    def __init__(self, anchor_id: int, line_no: int | None = None):
        self.anchor_id = anchor_id
        self.line_no = line_no
        where = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"duplicate id {anchor_id}{where}")


class MalformedTag(VistaError):
    pass


class UnknownIndex(VistaError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"#{index} refers to no @{index} anchor")


class SpanNotOnToken(VistaError):
    pass


class MissingSplit(VistaError):
    pass


class DomainError(VistaError, ValueError):
    pass


class DegenerateExtent(VistaError, ValueError):
    pass


class EmptyCandidates(VistaError, ValueError):
    pass


class EmptyText(VistaError, ValueError):
    pass


class RequestError(VistaError):
    """Any failure talking to a model endpoint."""


class HttpError(RequestError):
    def __init__(self, status: int, body: str = ""):
        self.status = status
        self.body = body
        super().__init__(f"HTTP {status}: {body[:200]}")


class RetriesExhausted(RequestError):
    def __init__(self, attempts: int, last: Exception | None = None):
        self.attempts = attempts
        self.last = last
        super().__init__(f"gave up after {attempts} attempts (last: {last})")


class RequestTimeout(RetriesExhausted):
    pass
