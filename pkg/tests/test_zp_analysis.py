import pytest
from hypothesis import given
from hypothesis import strategies as st

from zpaug.alignment import SentenceAlignment
from zpaug.zp_analysis import (
    FunctionalPosSet,
    PronounLexicon,
    ZPInstance,
    build_report,
    detect_zp,
    extract_local_context,
    read_instances,
    write_instances,
    write_report,
)

from helpers import make_pair

# "I" -> NULL, "feel" and "eating" -> 食べ, "eel" -> うなぎ
EEL_ALIGNMENT = SentenceAlignment((None, 2, None, 2, 0, None))


def test_detect_eel(eel_pair):
    [inst] = detect_zp(eel_pair, EEL_ALIGNMENT)
    assert (inst.pronoun, inst.en_index, inst.is_zero, inst.context) == ("i", 0, True, ())


def test_detect_no_pronouns():
    pair = make_pair("本", "the book")
    assert detect_zp(pair, SentenceAlignment((None, 0))) == []


def test_detect_non_zero():
    pair = make_pair("あなた は 行く", "you go")
    [inst] = detect_zp(pair, SentenceAlignment((2, 2)))
    assert inst.pronoun == "you" and not inst.is_zero


def test_detect_length_mismatch(eel_pair):
    with pytest.raises(ValueError, match="alignment length"):
        detect_zp(eel_pair, SentenceAlignment((None,)))


def test_detect_case_insensitive():
    pair = make_pair("行く", "THEY and They")
    insts = detect_zp(pair, SentenceAlignment((None, None, 0)))
    assert [i.pronoun for i in insts] == ["they", "they"]


def test_extract_eel(eel_pair):
    [inst] = detect_zp(eel_pair, EEL_ALIGNMENT)
    out = extract_local_context(eel_pair, EEL_ALIGNMENT, inst)
    assert out.context == ("食べ", "たい", "な")
    assert not out.context_less


def test_extract_head_aligned_to_null(eel_pair):
    al = SentenceAlignment((None, None, None, 2, 0, None))
    [inst] = detect_zp(eel_pair, al)
    out = extract_local_context(eel_pair, al, inst)
    assert out.context == () and out.context_less


def test_extract_root_pronoun():
    pair = make_pair("彼", "him", ja_pos="noun", heads=[0])
    al = SentenceAlignment((None,))
    [inst] = detect_zp(pair, al)
    out = extract_local_context(pair, al, inst)
    assert out.context == () and out.context_less


def test_extract_sentence_final_head():
    pair = make_pair("うなぎ を 食べる", "I eat eel", ja_pos="noun particle verb", heads=[2, 0, 2])
    al = SentenceAlignment((None, 2, 0))
    [inst] = detect_zp(pair, al)
    assert extract_local_context(pair, al, inst).context == ("食べる",)


def test_extract_stops_at_content_word():
    pair = make_pair(
        "食べ たい 本 な", "I want", ja_pos="verb auxiliary_verb noun particle", heads=[2, 0]
    )
    al = SentenceAlignment((None, 0))
    [inst] = detect_zp(pair, al)
    assert extract_local_context(pair, al, inst).context == ("食べ", "たい")


def test_extract_pos_matching_is_lenient():
    pair = make_pair("食べ たい", "I want", ja_pos=["verb", " Auxiliary  Verb "], heads=[2, 0])
    al = SentenceAlignment((None, 0))
    [inst] = detect_zp(pair, al)
    assert extract_local_context(pair, al, inst).context == ("食べ", "たい")
    mecab = FunctionalPosSet(frozenset(["助動詞"]))
    pair = make_pair("食べ たい", "I want", ja_pos="動詞 助動詞", heads=[2, 0])
    assert extract_local_context(pair, al, inst, mecab).context == ("食べ", "たい")


def test_extract_errors(eel_pair):
    inst = ZPInstance(0, 0, "i", True)
    no_parse = make_pair("うなぎ", "I", ja_pos="noun")
    with pytest.raises(ValueError, match="no English parse"):
        extract_local_context(no_parse, SentenceAlignment((None,)), inst)
    no_pos = make_pair("うなぎ", "I", heads=[0])
    with pytest.raises(ValueError, match="POS"):
        extract_local_context(no_pos, SentenceAlignment((None,)), inst)


@given(
    st.lists(st.sampled_from(["noun", "verb", "particle", "auxiliary_verb", "symbol"]), min_size=1, max_size=8),
    st.data(),
)
def test_context_is_contiguous_from_aligned_head(tags, data):
    ja = [f"w{i}" for i in range(len(tags))]
    k = data.draw(st.integers(0, len(ja) - 1))
    pair = make_pair(ja, "I go", ja_pos=tags, heads=[2, 0])
    al = SentenceAlignment((None, k))
    [inst] = detect_zp(pair, al)
    ctx = extract_local_context(pair, al, inst).context
    assert ctx[0] == ja[k]
    assert list(ctx) == ja[k : k + len(ctx)]
    fpos = FunctionalPosSet()
    assert all(t in fpos for t in tags[k + 1 : k + len(ctx)])
    if k + len(ctx) < len(ja):
        assert tags[k + len(ctx)] not in fpos


def test_report_counts():
    insts = [ZPInstance(0, 0, "i", True), ZPInstance(1, 0, "i", True), ZPInstance(2, 0, "i", False)]
    report = build_report(insts)
    assert report.total("i") == 3 and report.zero("i") == 2


def test_report_empty():
    report = build_report([])
    assert all(tot == 0 and zero == 0 for _, tot, zero, _ in report.rows())
    assert len(report.rows()) == 10


def test_report_sorted_and_serialized(tmp_path):
    insts = [ZPInstance(i, 0, "you", i % 2 == 0) for i in range(3)] + [ZPInstance(9, 0, "i", True)]
    report = build_report(insts, PronounLexicon(("i", "you")))
    path = tmp_path / "r.tsv"
    write_report(path, report)
    assert path.read_text() == "you\t3\t2\t0.6667\ni\t1\t1\t1.0000\n"


@given(st.lists(st.tuples(st.sampled_from(["i", "you", "we", "him"]), st.booleans()), max_size=40))
def test_report_partitions_instances(items):
    insts = [ZPInstance(n, 0, p, z) for n, (p, z) in enumerate(items)]
    report = build_report(insts)
    assert sum(tot for _, tot, _, _ in report.rows()) == len(insts)
    assert sum(zero for _, _, zero, _ in report.rows()) == sum(z for _, z in items)
    for _, tot, zero, _ in report.rows():
        assert 0 <= zero <= tot


def test_instances_roundtrip(tmp_path):
    insts = [ZPInstance(0, 0, "i", True, ("食べ", "たい", "な")), ZPInstance(3, 2, "you", False, (), True)]
    write_instances(tmp_path / "i.tsv", insts)
    assert (tmp_path / "i.tsv").read_text(encoding="utf-8").splitlines()[0] == "0\t0\ti\t1\t食べ たい な"
    assert read_instances(tmp_path / "i.tsv") == insts


def test_lexicon_validation():
    with pytest.raises(ValueError):
        PronounLexicon(())
    with pytest.raises(ValueError):
        PronounLexicon(("I",))
    assert "I" in PronounLexicon()
