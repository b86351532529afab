"""Exception types raised across the package."""


class EvidexError(Exception):
    """Base class for every package-specific failure."""


class MalformedRecord(EvidexError):
    """A corpus line could not be parsed into a document."""

    def __init__(self, line_no, reason):
        super().__init__(f"corpus line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateDocId(EvidexError):
    def __init__(self, doc_id, line_no):
        super().__init__(f"corpus line {line_no}: duplicate doc_id {doc_id!r}")
        self.doc_id = doc_id
        self.line_no = line_no


class EmptyCorpus(EvidexError):
    def __init__(self):
        super().__init__("corpus contains no sentences")


class MalformedRow(EvidexError):
    """A lexicon or mentions row has the wrong shape."""

    def __init__(self, line_no, reason):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class EmptyLexicon(EvidexError):
    def __init__(self):
        super().__init__("lexicon contains no entries")


class OverlappingMentions(EvidexError):
    def __init__(self, sentence_id):
        super().__init__(f"sentence {sentence_id}: mentions overlap")
        self.sentence_id = sentence_id


class MalformedSynonymConfig(EvidexError):
    def __init__(self, line_no, reason):
        super().__init__(f"synonym config line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class ArityMismatch(EvidexError):
    def __init__(self, expected, got):
        super().__init__(f"pattern arity {expected}, entity tuple of length {got}")
        self.expected = expected
        self.got = got


class EmptyQuery(EvidexError):
    def __init__(self):
        super().__init__("query is empty")


class UnknownEntityType(EvidexError):
    def __init__(self, name):
        super().__init__(f"unknown entity type {name!r}")
        self.name = name


class VersionMismatch(EvidexError):
    def __init__(self, found, expected):
        super().__init__(f"index format version {found}, this build reads {expected}")
        self.found = found
        self.expected = expected


class CorruptIndex(EvidexError):
    def __init__(self, filename, reason):
        super().__init__(f"{filename}: {reason}")
        self.filename = filename
        self.reason = reason


class MalformedQueryFile(EvidexError):
    def __init__(self, line_no, reason):
        super().__init__(f"query file line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class MalformedJudgments(EvidexError):
    def __init__(self, line_no, reason):
        super().__init__(f"judgments line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class UnknownQueryId(EvidexError):
    def __init__(self, query_id):
        super().__init__(f"judgments reference unknown query_id {query_id!r}")
        self.query_id = query_id
