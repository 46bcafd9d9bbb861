"""Directed word graph over (word, POS) nodes for sentence compression.

Sentences are added one at a time.  The first becomes a plain
START..END chain; tokens of later sentences map onto existing nodes when
word and tag match and the node has not yet absorbed a token of the same
sentence.  Mapping runs in three passes: unambiguous non-stopwords,
ambiguous non-stopwords (several candidates, or the word repeats inside
the sentence), then stopwords.  Ambiguity is resolved by neighbor
overlap, then node frequency, then node creation order.

Edge weights follow the inverse-distance association formula: lower
weight means a stronger, better-supported transition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import NoSupportingSentence
from .tagger import TaggedToken

START = ("-start-", "START")
END = ("-end-", "END")


@dataclass
class Node:
    word: str
    pos: str
    ordinal: int  # creation order, used for deterministic tie-breaks
    occurrences: list[tuple[int, int]] = field(default_factory=list)  # (sentence, position)

    @property
    def freq(self) -> int:
        return len(self.occurrences)

    @property
    def key(self) -> tuple[str, str]:
        return (self.word, self.pos)

    def in_sentence(self, sid: int) -> bool:
        return any(s == sid for s, _ in self.occurrences)


class WordGraph:
    def __init__(self):
        self.nodes: list[Node] = []
        self.edges: dict[tuple[int, int], int] = {}  # (from, to) -> traversal count
        self.sentences: list[list[int]] = []  # node ordinals incl. START/END
        self.start = self._new_node(*START)
        self.end = self._new_node(*END)

    def _new_node(self, word: str, pos: str) -> Node:
        node = Node(word=word, pos=pos, ordinal=len(self.nodes))
        self.nodes.append(node)
        return node

    def candidates(self, word: str, pos: str) -> list[Node]:
        return [n for n in self.nodes if n.key == (word, pos)]

    def successors(self, ordinal: int) -> list[int]:
        return sorted(j for (i, j) in self.edges if i == ordinal)

    def add_sentence(self, tokens: list[TaggedToken]) -> None:
        sid = len(self.sentences)
        words = [(t.word, t.pos) for t in tokens]
        mapping: list[Node | None] = [None] * len(tokens)

        multiplicity = {}
        for w in words:
            multiplicity[w] = multiplicity.get(w, 0) + 1

        def neighbors_in_sentence(i: int) -> tuple[tuple[str, str] | None, tuple[str, str] | None]:
            prev = words[i - 1] if i > 0 else START
            nxt = words[i + 1] if i + 1 < len(words) else END
            return prev, nxt

        def context_overlap(node: Node, i: int) -> int:
            prev, nxt = neighbors_in_sentence(i)
            score = 0
            for s, p in node.occurrences:
                chain = self.sentences[s]
                before = self.nodes[chain[p - 1]].key if p - 1 >= 0 else None
                after = self.nodes[chain[p + 1]].key if p + 1 < len(chain) else None
                if before == prev:
                    score += 1
                if after == nxt:
                    score += 1
            return score

        def map_or_create(i: int) -> None:
            word, pos = words[i]
            options = [
                n
                for n in self.candidates(word, pos)
                if not n.in_sentence(sid) and n not in mapping
            ]
            if not options:
                mapping[i] = self._new_node(word, pos)
                return
            best = max(
                options,
                key=lambda n: (context_overlap(n, i), n.freq, -n.ordinal),
            )
            mapping[i] = best

        # pass 1: unambiguous non-stopwords
        for i, tok in enumerate(tokens):
            if tok.is_stopword:
                continue
            if multiplicity[words[i]] == 1 and len(self.candidates(*words[i])) <= 1:
                map_or_create(i)
        # pass 2: ambiguous non-stopwords and in-sentence repeats
        for i, tok in enumerate(tokens):
            if tok.is_stopword or mapping[i] is not None:
                continue
            map_or_create(i)
        # pass 3: stopwords
        for i, tok in enumerate(tokens):
            if not tok.is_stopword:
                continue
            map_or_create(i)

        chain = [self.start.ordinal]
        self.start.occurrences.append((sid, 0))
        for i, node in enumerate(mapping):
            assert node is not None
            node.occurrences.append((sid, i + 1))
            chain.append(node.ordinal)
        self.end.occurrences.append((sid, len(tokens) + 1))
        chain.append(self.end.ordinal)
        self.sentences.append(chain)

        for a, b in zip(chain, chain[1:]):
            self.edges[(a, b)] = self.edges.get((a, b), 0) + 1


def build_word_graph(sentences: list[list[TaggedToken]]) -> WordGraph:
    if not sentences or any(not s for s in sentences):
        raise ValueError("need at least one non-empty tagged sentence")
    graph = WordGraph()
    for tokens in sentences:
        graph.add_sentence(tokens)
    return graph


def edge_weight(graph: WordGraph, i: int, j: int) -> float:
    """Association-normalized weight of edge (i, j); lower is stronger.

    association = (freq_i + freq_j) / sum over supporting sentences of
    1 / (pos_j - pos_i); weight = association / (freq_i * freq_j).
    """
    if (i, j) not in graph.edges:
        raise KeyError(f"no edge {i} -> {j}")
    a = graph.nodes[i]
    b = graph.nodes[j]
    inv_dist = 0.0
    pos_by_sentence_a = {s: p for s, p in a.occurrences}
    for s, pj in b.occurrences:
        pi = pos_by_sentence_a.get(s)
        if pi is not None and pi < pj:
            inv_dist += 1.0 / (pj - pi)
    if inv_dist == 0.0:
        raise NoSupportingSentence(f"edge {a.key} -> {b.key} has no ordered support")
    association = (a.freq + b.freq) / inv_dist
    return association / (a.freq * b.freq)


def weighted_adjacency(graph: WordGraph) -> dict[int, list[tuple[int, float]]]:
    adj: dict[int, list[tuple[int, float]]] = {}
    for (i, j) in sorted(graph.edges):
        adj.setdefault(i, []).append((j, edge_weight(graph, i, j)))
    return adj
