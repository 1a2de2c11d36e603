"""Tokenization and answerability classes for question tokens.

Every token of a question falls into exactly one of four classes: question
type (wh-words), named entity (capitalized words), function word (closed-class
words from a lexicon) or content word (everything else).
"""

from __future__ import annotations

import enum
import hashlib
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

DEFAULT_QUESTION_TYPES = frozenset(
    ["who", "whom", "whose", "what", "which", "when", "where", "why", "how"]
)


class TokenClass(enum.Enum):
    QUESTION_TYPE = "question_type"
    NAMED_ENTITY = "named_entity"
    CONTENT = "content"
    FUNCTION = "function"


@dataclass(frozen=True)
class TokenList:
    tokens: tuple[str, ...]
    original_text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    def join(self) -> str:
        return " ".join(self.tokens)


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _strip_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]):
        start += 1
    while end > start and _is_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def tokenize(text: str, strip_punct: bool = True) -> TokenList:
    """Split ``text`` on whitespace.

    With ``strip_punct`` (the default) leading and trailing punctuation is
    removed from every token and tokens that were pure punctuation disappear,
    so ``"Who was the director of Titanic ?"`` gives six tokens.
    """
    parts = text.split()
    if strip_punct:
        parts = [p for p in (_strip_punct(p) for p in parts) if p]
    return TokenList(tuple(parts), text)


def _read_word_file(lines: Iterable[str]) -> set[str]:
    words = set()
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if any(ch.isspace() for ch in line):
            raise ValueError(f"lexicon entry contains whitespace: {line!r}")
        words.add(line.lower())
    return words


@dataclass(frozen=True)
class Lexicon:
    """Function words and question-type words used for classification.

    Question-type entries are removed from the function-word set on
    construction, so the two sets are always disjoint.
    """

    function_words: frozenset[str]
    question_types: frozenset[str] = DEFAULT_QUESTION_TYPES

    def __post_init__(self):
        qt = frozenset(w.lower() for w in self.question_types)
        fw = frozenset(w.lower() for w in self.function_words) - qt
        for w in qt | fw:
            if not w or any(ch.isspace() for ch in w):
                raise ValueError(f"invalid lexicon entry: {w!r}")
        object.__setattr__(self, "question_types", qt)
        object.__setattr__(self, "function_words", fw)

    @classmethod
    def default(cls) -> "Lexicon":
        return _default_lexicon()

    @classmethod
    def from_file(cls, path, question_types: Iterable[str] | None = None) -> "Lexicon":
        """Load function words from a UTF-8 file, one token per line, ``#`` comments."""
        with open(path, encoding="utf-8") as fh:
            words = _read_word_file(fh)
        qt = DEFAULT_QUESTION_TYPES if question_types is None else question_types
        return cls(frozenset(words), frozenset(qt))

    def digest(self) -> str:
        """Stable sha256 over both word sets, recorded in output metadata."""
        h = hashlib.sha256()
        for w in sorted(self.function_words):
            h.update(b"f:" + w.encode("utf-8") + b"\n")
        for w in sorted(self.question_types):
            h.update(b"q:" + w.encode("utf-8") + b"\n")
        return h.hexdigest()


_DEFAULT = None


def _default_lexicon() -> Lexicon:
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files("qmetric").joinpath("data/function_words.txt").read_text("utf-8")
        _DEFAULT = Lexicon(frozenset(_read_word_file(text.splitlines())))
    return _DEFAULT


@dataclass(frozen=True)
class ClassifiedQuestion:
    tokens: TokenList
    classes: tuple[TokenClass, ...]
    lowered: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.lowered:
            object.__setattr__(self, "lowered", tuple(t.lower() for t in self.tokens))
        if not (len(self.tokens) == len(self.classes) == len(self.lowered)):
            raise ValueError("tokens, classes and lowered must be parallel")

    def __len__(self) -> int:
        return len(self.classes)

    def positions(self, cls: TokenClass) -> list[int]:
        return [i for i, c in enumerate(self.classes) if c is cls]

    def words(self, cls: TokenClass) -> list[str]:
        return [w for w, c in zip(self.lowered, self.classes) if c is cls]


def classify_token(token: str, lexicon: Lexicon) -> TokenClass:
    low = token.lower()
    if low in lexicon.question_types:
        return TokenClass.QUESTION_TYPE
    if token[:1].isupper():
        return TokenClass.NAMED_ENTITY
    if low in lexicon.function_words:
        return TokenClass.FUNCTION
    return TokenClass.CONTENT


def classify_tokens(tokens: TokenList | Sequence[str], lexicon: Lexicon | None = None) -> ClassifiedQuestion:
    """Assign every token one class.

    Precedence is question type, then named entity (initial uppercase), then
    function word, then content word; ``What`` is therefore a question type
    even though it is capitalized.
    """
    if lexicon is None:
        lexicon = Lexicon.default()
    if not isinstance(tokens, TokenList):
        tokens = TokenList(tuple(tokens), " ".join(tokens))
    classes = tuple(classify_token(t, lexicon) for t in tokens)
    return ClassifiedQuestion(tokens, classes)


def classify(text: str, lexicon: Lexicon | None = None, strip_punct: bool = True) -> ClassifiedQuestion:
    return classify_tokens(tokenize(text, strip_punct), lexicon)


def load_lexicon(path: str | Path | None) -> Lexicon:
    return Lexicon.default() if path is None else Lexicon.from_file(path)
