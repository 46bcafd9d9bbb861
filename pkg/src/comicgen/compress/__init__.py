"""Multi-sentence compression via shortest paths in a word graph.

`compress` merges the subtitle sentences attached to one keyframe into a
single compact sentence: build the graph, take the K lightest paths,
drop those lacking a verb or enough content words, and keep the path
with the lightest weight per node.  The content-word floor relaxes one
step at a time (down to 3) when every path gets rejected, and the
shortest input sentence is the last resort.
"""

from __future__ import annotations

from ..errors import EmptyAfterStripping
from .paths import k_shortest_paths
from .tagger import STOPWORDS, TaggedToken, pos_tag
from .wordgraph import WordGraph, build_word_graph, edge_weight

__all__ = [
    "compress",
    "pos_tag",
    "TaggedToken",
    "build_word_graph",
    "WordGraph",
    "edge_weight",
    "k_shortest_paths",
    "STOPWORDS",
]

DEFAULT_MIN_WORDS = 8
DEFAULT_K = 50
RELAX_FLOOR = 3


def _normalize(text: str) -> str:
    text = " ".join(text.split())
    if not text:
        return text
    text = text[0].upper() + text[1:]
    if text[-1] not in ".!?":
        text += "."
    return text


def _path_words(graph: WordGraph, path: list[int]) -> list[str]:
    inner = path[1:-1]
    return [graph.nodes[i].word for i in inner]


def _content_count(graph: WordGraph, path: list[int]) -> int:
    return sum(1 for i in path[1:-1] if graph.nodes[i].word not in STOPWORDS)


def _has_verb(graph: WordGraph, path: list[int]) -> bool:
    return any(graph.nodes[i].pos == "VB" for i in path[1:-1])


def compress(
    sentences: list[str],
    min_words: int = DEFAULT_MIN_WORDS,
    k: int = DEFAULT_K,
    length_mode: str = "nodes",
) -> str:
    """Best compression of the input sentences as a rendered string.

    length_mode picks the normalization denominator for path ranking:
    "nodes" (non-terminal node count, default) or "edges".
    """
    if not sentences:
        raise ValueError("compress needs at least one sentence")
    if length_mode not in ("nodes", "edges"):
        raise ValueError("length_mode must be nodes or edges")

    tagged: list[tuple[str, list[TaggedToken]]] = []
    for raw in sentences:
        try:
            tagged.append((raw, pos_tag(raw)))
        except EmptyAfterStripping:
            continue
    if not tagged:
        return _normalize(min(sentences, key=lambda s: (len(s.split()), sentences.index(s))))
    if len(tagged) == 1:
        return _normalize(tagged[0][0])

    graph = build_word_graph([toks for _, toks in tagged])
    ranked = k_shortest_paths(graph, k)

    floor = min(RELAX_FLOOR, min_words)
    for threshold in range(min_words, floor - 1, -1):
        survivors = [
            (cost, path)
            for cost, path in ranked
            if _content_count(graph, path) >= threshold and _has_verb(graph, path)
        ]
        if not survivors:
            continue
        scored = []
        for cost, path in survivors:
            length = len(path) - 2 if length_mode == "nodes" else len(path) - 1
            scored.append((cost / max(length, 1), tuple(path), path))
        scored.sort(key=lambda t: (t[0], t[1]))
        return _normalize(" ".join(_path_words(graph, scored[0][2])))

    shortest = min(tagged, key=lambda rt: (len(rt[1]), tagged.index(rt)))
    return _normalize(shortest[0])
