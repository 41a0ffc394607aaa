"""Document corpus: loading, validation, tokenization, and seed queries.

The corpus file format is line-delimited JSON, one record per line, with
keys ``id`` (required), ``title``, ``abstract``, ``year``, ``doc_type``
and ``references``. Loading is forgiving: malformed lines are skipped and
counted, field-level irregularities are repaired and counted, and only
records without a usable unique id are rejected outright.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import CorpusError

# Token = maximal run of letters/digits; everything else separates.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class DocType(Enum):
    PATENT = "Patent"
    JOURNAL = "Journal"
    BOOK = "Book"
    CONFERENCE = "Conference"
    NONE = "None"

    @classmethod
    def from_string(cls, raw: object) -> "DocType":
        """Map a raw value onto the taxonomy; unknown strings become NONE."""
        if isinstance(raw, str):
            try:
                return _DOC_TYPE_LOOKUP[raw.strip().lower()]
            except KeyError:
                return cls.NONE
        return cls.NONE


_DOC_TYPE_LOOKUP = {
    "patent": DocType.PATENT,
    "journal": DocType.JOURNAL,
    "book": DocType.BOOK,
    "conference": DocType.CONFERENCE,
}

DOC_TYPES = (DocType.PATENT, DocType.JOURNAL, DocType.BOOK,
             DocType.CONFERENCE, DocType.NONE)


@dataclass(frozen=True)
class Document:
    """One corpus entry. ``references`` holds outgoing citation targets;
    they are deduplicated and never include the document's own id."""

    id: str
    title: str = ""
    abstract: str = ""
    year: int | None = None
    doc_type: DocType = DocType.NONE
    references: tuple[str, ...] = ()


class Corpus:
    """Id-indexed, immutable collection of documents."""

    def __init__(self, documents: dict[str, Document]):
        self._documents = dict(documents)
        years = [d.year for d in self._documents.values() if d.year is not None]
        self._year_range = (min(years), max(years)) if years else None

    @property
    def documents(self) -> dict[str, Document]:
        return self._documents

    @property
    def year_range(self) -> tuple[int, int] | None:
        return self._year_range

    def ids(self) -> set[str]:
        return set(self._documents)

    def __len__(self) -> int:
        return len(self._documents)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._documents

    def __getitem__(self, doc_id: str) -> Document:
        return self._documents[doc_id]

    def __iter__(self):
        return iter(self._documents.values())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Corpus) and self._documents == other._documents


@dataclass
class LoadReport:
    """Bookkeeping for one load_corpus call."""

    path: str = ""
    total_lines: int = 0
    accepted: int = 0
    malformed_lines: int = 0
    missing_id: int = 0
    duplicate_id: int = 0
    self_references_removed: int = 0
    duplicate_references_removed: int = 0
    bad_fields_repaired: int = 0
    problems: list[str] = field(default_factory=list)

    _MAX_PROBLEMS = 50

    @property
    def rejected(self) -> int:
        return self.malformed_lines + self.missing_id + self.duplicate_id

    @property
    def repaired(self) -> int:
        return (self.self_references_removed + self.duplicate_references_removed
                + self.bad_fields_repaired)

    def note(self, line_no: int, message: str) -> None:
        if len(self.problems) < self._MAX_PROBLEMS:
            self.problems.append(f"line {line_no}: {message}")

    def summary(self) -> str:
        lines = [
            f"corpus load: {self.path}",
            f"  lines read        : {self.total_lines}",
            f"  records accepted  : {self.accepted}",
            f"  records rejected  : {self.rejected} "
            f"(malformed={self.malformed_lines}, missing_id={self.missing_id}, "
            f"duplicate_id={self.duplicate_id})",
            f"  repairs           : self_refs={self.self_references_removed}, "
            f"dup_refs={self.duplicate_references_removed}, "
            f"bad_fields={self.bad_fields_repaired}",
        ]
        for p in self.problems:
            lines.append(f"  ! {p}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "total_lines": self.total_lines,
            "accepted": self.accepted,
            "rejected": self.rejected,
            "malformed_lines": self.malformed_lines,
            "missing_id": self.missing_id,
            "duplicate_id": self.duplicate_id,
            "self_references_removed": self.self_references_removed,
            "duplicate_references_removed": self.duplicate_references_removed,
            "bad_fields_repaired": self.bad_fields_repaired,
            "problems": list(self.problems),
        }


def tokenize(text: str) -> list[str]:
    """Case-folded tokens; every maximal run of letters/digits is one token."""
    if not text:
        return []
    return _TOKEN_RE.findall(text.casefold())


@dataclass(frozen=True)
class Query:
    """Seed query: matches when any phrase occurs as a contiguous token run."""

    phrases: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.phrases:
            raise CorpusError("query has no phrases")
        for phrase in self.phrases:
            if not phrase:
                raise CorpusError("query phrase has no tokens")
            for token in phrase:
                if tokenize(token) != [token]:
                    raise CorpusError(
                        f"query token {token!r} is not a lowercase bare token")

    @classmethod
    def from_strings(cls, phrases: list[str] | tuple[str, ...]) -> "Query":
        """Build a query from raw phrase strings, tokenizing each one."""
        tokenized = tuple(tuple(tokenize(p)) for p in phrases)
        return cls(tokenized)


def matches_query(doc: Document, query: Query) -> bool:
    """True iff some query phrase is a contiguous subsequence of the
    tokenized abstract. Only the abstract is searched."""
    tokens = tokenize(doc.abstract)
    if not tokens:
        return False
    for phrase in query.phrases:
        plen = len(phrase)
        if plen > len(tokens):
            continue
        first = phrase[0]
        for i in range(len(tokens) - plen + 1):
            if tokens[i] == first and tuple(tokens[i:i + plen]) == phrase:
                return True
    return False


def select_seeds(corpus: Corpus, query: Query) -> set[str]:
    """Ids of all documents whose abstract matches the query."""
    return {doc.id for doc in corpus if matches_query(doc, query)}


def _clean_record(raw: dict, report: LoadReport, line_no: int) -> Document | None:
    doc_id = raw.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        report.missing_id += 1
        report.note(line_no, "missing or empty id")
        return None

    title = raw.get("title", "")
    if not isinstance(title, str):
        title = ""
        report.bad_fields_repaired += 1
        report.note(line_no, f"{doc_id}: non-string title dropped")
    abstract = raw.get("abstract", "")
    if not isinstance(abstract, str):
        abstract = ""
        report.bad_fields_repaired += 1
        report.note(line_no, f"{doc_id}: non-string abstract dropped")

    year = raw.get("year")
    if year is not None:
        if isinstance(year, bool):
            year = None
        elif isinstance(year, int):
            pass
        elif isinstance(year, float) and year.is_integer():
            year = int(year)
        else:
            year = None
        if year is None:
            report.bad_fields_repaired += 1
            report.note(line_no, f"{doc_id}: unusable year dropped")

    refs_raw = raw.get("references", [])
    if not isinstance(refs_raw, list):
        refs_raw = []
        report.bad_fields_repaired += 1
        report.note(line_no, f"{doc_id}: non-list references dropped")
    references: list[str] = []
    seen: set[str] = set()
    for ref in refs_raw:
        if not isinstance(ref, str) or not ref:
            report.bad_fields_repaired += 1
            continue
        if ref == doc_id:
            report.self_references_removed += 1
            continue
        if ref in seen:
            report.duplicate_references_removed += 1
            continue
        seen.add(ref)
        references.append(ref)

    return Document(
        id=doc_id,
        title=title,
        abstract=abstract,
        year=year,
        doc_type=DocType.from_string(raw.get("doc_type")),
        references=tuple(references),
    )


def load_corpus(path: str | Path, fmt: str = "jsonl") -> tuple[Corpus, LoadReport]:
    """Load a corpus file. Returns the corpus and a load report.

    Malformed lines are skipped (non-fatal); records with a missing or
    duplicate id are rejected; reference lists are deduplicated and
    self-references dropped.
    """
    if fmt != "jsonl":
        raise CorpusError(f"unsupported corpus format: {fmt}")
    path = Path(path)
    report = LoadReport(path=str(path))
    documents: dict[str, Document] = {}
    try:
        handle = path.open("r", encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc
    with handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            report.total_lines += 1
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                report.malformed_lines += 1
                report.note(line_no, f"invalid JSON ({exc.msg})")
                continue
            if not isinstance(raw, dict):
                report.malformed_lines += 1
                report.note(line_no, "record is not an object")
                continue
            doc = _clean_record(raw, report, line_no)
            if doc is None:
                continue
            if doc.id in documents:
                report.duplicate_id += 1
                report.note(line_no, f"duplicate id {doc.id!r} rejected")
                continue
            documents[doc.id] = doc
            report.accepted += 1
    return Corpus(documents), report


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus in the line-delimited record format (deterministic)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for doc in corpus:
            record = {
                "id": doc.id,
                "title": doc.title,
                "abstract": doc.abstract,
                "doc_type": doc.doc_type.value,
                "references": list(doc.references),
            }
            if doc.year is not None:
                record["year"] = doc.year
            handle.write(json.dumps(record, sort_keys=True, ensure_ascii=False))
            handle.write("\n")
