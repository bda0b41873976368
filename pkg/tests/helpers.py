from zpaug.corpus_io import Corpus, DepTree, SentencePair, Token


def make_pair(ja, en, id=0, doc_id="doc", pos_in_doc=0, ja_pos=None, heads=None):
    ja = ja.split() if isinstance(ja, str) else list(ja)
    en = en.split() if isinstance(en, str) else list(en)
    tags = ja_pos.split() if isinstance(ja_pos, str) else ja_pos
    ja_tokens = tuple(Token(s, tags[i] if tags else None) for i, s in enumerate(ja))
    return SentencePair(
        id=id,
        doc_id=doc_id,
        pos_in_doc=pos_in_doc,
        ja_raw="".join(ja),
        ja_tokens=ja_tokens,
        en_tokens=tuple(Token(w) for w in en),
        en_parse=DepTree(tuple(heads)) if heads else None,
    )


def make_corpus(pairs):
    return Corpus(tuple(make_pair(ja, en, id=i, pos_in_doc=i) for i, (ja, en) in enumerate(pairs)))
