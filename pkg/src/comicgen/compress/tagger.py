"""Coarse part-of-speech tagging for word-graph construction.

Ten-tag set (NN VB JJ RB DT IN PRP CC CD OTHER), resolved by an embedded
lexicon of common words, then suffix heuristics, then a noun default.
Pre-tagged input ("word_TAG word_TAG ...", every token carrying an
underscore) bypasses the tagger entirely so an external tagger can be
used for exact reproduction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import EmptyAfterStripping

TAGS = ("NN", "VB", "JJ", "RB", "DT", "IN", "PRP", "CC", "CD", "OTHER")

_WORD_RE = re.compile(r"[a-z0-9]+(?:'[a-z]+)*", re.IGNORECASE)

_LEXICON_BY_TAG = {
    "DT": """
        the a an this that these those each every either neither some any no
        all both such what which whose
        """,
    "PRP": """
        i you he she it we they me him her us them my your his its our their
        mine yours hers ours theirs myself yourself himself herself itself
        ourselves yourselves themselves who whom someone anyone everyone
        nobody somebody anybody everybody something anything everything
        nothing
        """,
    "IN": """
        in on at by for with about against between into through during before
        after above below to from up down of off over under once near since
        until while although though because if unless than as like except
        without within upon toward towards across behind beyond around among
        despite outside inside onto out
        """,
    "CC": "and but or nor so yet plus",
    "CD": """
        one two three four five six seven eight nine ten eleven twelve
        thirteen fourteen fifteen sixteen seventeen eighteen nineteen twenty
        thirty forty fifty sixty seventy eighty ninety hundred thousand
        million billion
        """,
    "VB": """
        am is are was were be been being have has had having do does did
        doing done will would can could shall should may might must ought go
        goes went gone going get gets got gotten getting make makes made
        making know knows knew known think thinks thought take takes took
        taken see sees saw seen come comes came coming want wants wanted
        look looks looked looking use used find found give gives gave given
        tell tells told work works worked call calls called calling try
        tried tries ask asked need needs needed feel feels felt become
        became leave leaves left put mean means meant keep keeps kept let
        lets begin began begun seem seems seemed help helps helped talk
        talks talked turn turns turned start started show shows showed shown
        hear hears heard play played run runs ran move moved live lived
        believe believed hold held bring brought happen happened write
        writes wrote written sit sat stand stood lose lost pay paid meet met
        include continue set learn learned change changed lead led
        understand understood watch watched follow followed stop stopped
        create created speak spoke spoken read spend spent grow grew grown
        walk walked win won offer offered remember remembered appear
        appeared buy bought wait waited serve served die died send sent
        expect expected build built stay stayed fall fell fallen cut reach
        reached kill killed remain remained eat ate eaten drink drank sleep
        slept say says said saying listen love loved hate hated open opened
        close closed save saved trust trusted promise promised jump jumped
        catch caught throw threw thrown forget forgot forgotten wish wished
        hope hoped miss missed
        """,
    "RB": """
        not never always often sometimes usually really very too also just
        now then here there soon already still almost quite rather maybe
        perhaps together away back even well far early late today tomorrow
        yesterday anywhere everywhere somewhere nowhere ever else instead
        indeed nearly again please
        """,
    "JJ": """
        good bad great small big large little old new young long short high
        low right wrong same different important beautiful happy sad angry
        afraid alone free full empty hot cold warm dark dead alive strong
        weak easy difficult true false real sure ready nice poor rich hard
        soft deep wide certain clear white black red blue green last next
        first second own other another few many much more most less least
        several able whole main fine okay sorry
        """,
    "NN": """
        man woman boy girl child children people person time year day night
        morning way thing things world life hand eye eyes head face mouth
        place home house room door water fire air earth ship sea ocean dream
        name word words story book money school family friend friends father
        mother brother sister son daughter king queen god heart mind body
        voice sound music film movie car city town country street road food
        dog cat horse bird fish tree flower sun moon star sky rain snow wind
        end part side top bottom problem question answer reason idea fact
        case point number group area week month hour minute moment lot bit
        kind sort type captain sir madam lady gentleman boat deck
        """,
    "OTHER": "oh ah hey hi hello wow ouch hmm yeah yep nah um uh huh bye goodbye",
}

LEXICON: dict[str, str] = {}
for _tag, _words in _LEXICON_BY_TAG.items():
    for _w in _words.split():
        LEXICON.setdefault(_w, _tag)

STOPWORDS = frozenset(
    """
    a about above after again against all am an and any are aren't as at be
    because been before being below between both but by can cannot could
    couldn't did didn't do does doesn't doing don't down during each few for
    from further had hadn't has hasn't have haven't having he he'd he'll
    he's her here here's hers herself him himself his how how's i i'd i'll
    i'm i've if in into is isn't it it's its itself just let's me more most
    mustn't my myself no nor not now of off on once only or other ought our
    ours ourselves out over own same shan't she she'd she'll she's should
    shouldn't so some such than that that's the their theirs them themselves
    then there there's these they they'd they'll they're they've this those
    through to too under until up very was wasn't we we'd we'll we're we've
    were weren't what what's when when's where where's which while who who's
    whom why why's will with won't would wouldn't you you'd you'll you're
    you've your yours yourself yourselves yes well oh ah
    """.split()
)

_NOUN_SUFFIXES = ("tion", "sion", "ness", "ment", "ity", "ance", "ence", "ship", "hood")
_CONTRACTION_SUFFIXES = ("'s", "'re", "'ll", "'m", "'ve", "'d", "n't")


@dataclass(frozen=True)
class TaggedToken:
    word: str
    pos: str
    is_stopword: bool


def _suffix_tag(word: str) -> str:
    for suf in _CONTRACTION_SUFFIXES:
        if word.endswith(suf) and len(word) > len(suf):
            return "VB"
    if word.endswith("ly") and len(word) >= 4:
        return "RB"
    for suf in _NOUN_SUFFIXES:
        if word.endswith(suf) and len(word) > len(suf) + 1:
            return "NN"
    if word.endswith("ing") and len(word) >= 5:
        return "VB"
    if word.endswith("ed") and len(word) >= 4:
        return "VB"
    if word.endswith("s") and not word.endswith("ss") and len(word) >= 4:
        stem = word[:-1]
        if LEXICON.get(stem) == "VB":
            return "VB"
        return "NN"
    if word.isdigit():
        return "CD"
    return "NN"


def tag_word(word: str) -> str:
    return LEXICON.get(word) or _suffix_tag(word)


def pos_tag(sentence: str) -> list[TaggedToken]:
    """Tokenize, lowercase and tag one sentence; punctuation is dropped.

    Raises EmptyAfterStripping when nothing tokenizable remains.
    """
    if _is_pretagged(sentence):
        return _parse_pretagged(sentence)
    words = [w.lower() for w in _WORD_RE.findall(sentence)]
    if not words:
        raise EmptyAfterStripping(f"no words left in {sentence!r}")
    return [TaggedToken(w, tag_word(w), w in STOPWORDS) for w in words]


def _is_pretagged(sentence: str) -> bool:
    toks = sentence.split()
    return bool(toks) and all("_" in t for t in toks)


def _parse_pretagged(sentence: str) -> list[TaggedToken]:
    out = []
    for tok in sentence.split():
        word, _, tag = tok.rpartition("_")
        word = word.lower()
        if not word:
            raise EmptyAfterStripping(f"bad pre-tagged token {tok!r}")
        tag = tag.upper()
        # collapse fine-grained tags (VBD, NNS, ...) onto the coarse set
        coarse = next((t for t in ("VB", "NN", "JJ", "RB", "DT", "IN", "PRP", "CC", "CD") if tag.startswith(t)), "OTHER")
        out.append(TaggedToken(word, coarse, word in STOPWORDS))
    if not out:
        raise EmptyAfterStripping("empty pre-tagged sentence")
    return out
