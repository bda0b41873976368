import hashlib

import pytest

from zpaug.cli import run
from zpaug.synthetic import synthetic_corpus, write_synthetic_corpus


def digest(paths):
    return {str(p): hashlib.sha256(p.read_bytes()).hexdigest() for p in paths}


@pytest.fixture(scope="module")
def synth(tmp_path_factory):
    d = tmp_path_factory.mktemp("synth")
    return write_synthetic_corpus(d / "s", synthetic_corpus(300, seed=0))


def corpus_flags(paths, annotations=True):
    flags = ["--ja", str(paths["ja"]), "--en", str(paths["en"]), "--docs", str(paths["docs"]),
             "--ja-pos", str(paths["ja_pos"])]
    if annotations:
        flags += ["--en-conllu", str(paths["en_conllu"])]
    return flags


def test_bleu_identity(tmp_path, capsys):
    f = tmp_path / "h.txt"
    f.write_text("the cat sat on the mat\na b c d e\n", encoding="utf-8")
    assert run(["bleu", "--hyp", str(f), "--ref", str(f)]) == 0
    assert capsys.readouterr().out == "100.00\n"


def test_augment_golden(data_dir, tmp_path, capsys):
    d = data_dir / "augment"
    ja, en, docs = d / "ja.txt", d / "en.txt", d / "docs.txt"
    before = digest([ja, en, docs])
    prefix = str(tmp_path / "aug")
    assert run(["augment", "--ja", str(ja), "--en", str(en), "--docs", str(docs), "--out-prefix", prefix]) == 0
    assert capsys.readouterr().out == "input_pairs\t20\nmatched_pairs\t7\nemitted_pairs\t7\ndeletions_total\t8\n"
    for ext in ("ja", "en", "docs", "prov.tsv"):
        assert (tmp_path / f"aug.{ext}").read_bytes() == (d / f"expected.{ext}").read_bytes(), ext
    assert digest([ja, en, docs]) == before


def test_augment_append_and_groups(data_dir, tmp_path, capsys):
    d = data_dir / "augment"
    prefix = str(tmp_path / "aug")
    argv = ["augment", "--ja", str(d / "ja.txt"), "--en", str(d / "en.txt"), "--out-prefix", prefix,
            "--append", "--groups", "first_singular"]
    assert run(argv) == 0
    out = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
    n_lines = len((tmp_path / "aug.ja").read_text(encoding="utf-8").splitlines())
    assert n_lines == 20 + int(out["emitted_pairs"])
    assert 0 < int(out["emitted_pairs"]) < 7


def test_compile_patterns(tmp_path):
    out = tmp_path / "p.txt"
    assert run(["compile-patterns", "--out", str(out)]) == 0
    assert len(out.read_text(encoding="utf-8").splitlines()) == 544
    assert run(["compile-patterns", "--groups", "first_singular", "--out", str(out)]) == 0
    assert len(out.read_text(encoding="utf-8").splitlines()) == 144


def test_zp_eval(tmp_path, capsys):
    triples = tmp_path / "t.tsv"
    triples.write_text("0\tsrc\tI go\tyou go\n1\tsrc\tI eat\the eats\n2\tsrc\twe run\tthey run\n", encoding="utf-8")
    scores = tmp_path / "s.tsv"
    scores.write_text("0\t1.5\t2.0\n1\t3.0\t3.0\n2\t2.0\t9.0\n", encoding="utf-8")
    outcomes = tmp_path / "o.tsv"
    assert run(["zp-eval", "--triples", str(triples), "--scores", str(scores), "--outcomes", str(outcomes)]) == 0
    assert capsys.readouterr().out == "0.6667\n"
    assert outcomes.read_text(encoding="utf-8") == "0\t1\n1\t0\n2\t1\n"


def test_lm_scoring_chain(tmp_path, capsys):
    corpus = tmp_path / "c.txt"
    corpus.write_text("i want to eat eel\ndid you see it\n", encoding="utf-8")
    triples = tmp_path / "t.tsv"
    triples.write_text("0\tx\ti want to eat eel\the want to eat eel\n", encoding="utf-8")
    lm, scores = tmp_path / "lm.txt", tmp_path / "s.tsv"
    assert run(["lm-train", "--corpus", str(corpus), "--out", str(lm)]) == 0
    assert run(["score-triples", "--lm", str(lm), "--triples", str(triples), "--out", str(scores)]) == 0
    assert run(["zp-eval", "--triples", str(triples), "--scores", str(scores)]) == 0
    assert capsys.readouterr().out == "1.0000\n"


def test_eel_detect_extract(data_dir, tmp_path):
    d = data_dir / "eel"
    common = ["--ja", str(d / "ja.txt"), "--en", str(d / "en.txt"), "--alignments", str(d / "align.txt")]
    inst, ctx = tmp_path / "inst.tsv", tmp_path / "ctx.tsv"
    assert run(["detect", *common, "--out", str(inst)]) == 0
    assert inst.read_text(encoding="utf-8") == "0\t0\ti\t1\t\n"
    argv = ["extract", *common, "--ja-pos", str(d / "ja.pos"), "--en-conllu", str(d / "en.conllu"),
            "--instances", str(inst), "--out", str(ctx)]
    assert run(argv) == 0
    assert ctx.read_text(encoding="utf-8") == "0\t0\ti\t1\t食べ たい な\n"


def test_extract_requires_annotations(data_dir, tmp_path, capsys):
    d = data_dir / "eel"
    argv = ["extract", "--ja", str(d / "ja.txt"), "--en", str(d / "en.txt"), "--alignments",
            str(d / "align.txt"), "--instances", str(d / "align.txt"), "--out", str(tmp_path / "x")]
    assert run(argv) == 1
    assert "--ja-pos" in capsys.readouterr().err


def test_classify_train_and_top_features(synth, tmp_path, capsys):
    out = tmp_path / "run"
    assert run(["pipeline", *corpus_flags(synth), "--epochs", "100", "--out-dir", str(out)]) == 0
    model = tmp_path / "m.txt"
    assert run(["classify-train", "--instances", str(out / "contexts.tsv"), "--epochs", "100",
                "--out", str(model)]) == 0
    capsys.readouterr()
    assert run(["top-features", "--model", str(model), "--label", "i", "--k", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3 and all(len(line.split("\t")) == 2 for line in lines)
    assert run(["top-features", "--model", str(model), "--label", "nobody"]) == 1


def test_pipeline_outputs_and_inputs_untouched(synth, tmp_path):
    before = digest(synth.values())
    out = tmp_path / "run"
    assert run(["pipeline", *corpus_flags(synth), "--epochs", "50", "--out-dir", str(out)]) == 0
    assert digest(synth.values()) == before
    names = sorted(p.name for p in out.iterdir())
    assert names == ["alignments.txt", "contexts.tsv", "cv.tsv", "instances.tsv", "report.tsv", "table.tsv"]
    cv = (out / "cv.tsv").read_text(encoding="utf-8").splitlines()
    assert cv[0] == "label\trecall\tbaseline_recall\tsupport"
    zero = sum(int(r.split("\t")[2]) for r in (out / "report.tsv").read_text(encoding="utf-8").splitlines())
    assert zero > 0


def test_concat_2to1(synth, tmp_path):
    prefix = tmp_path / "c"
    assert run(["concat-2to1", *corpus_flags(synth, annotations=False), "--out-prefix", str(prefix)]) == 0
    first = synth["ja"].read_text(encoding="utf-8").splitlines()
    out = (tmp_path / "c.ja").read_text(encoding="utf-8").splitlines()
    assert out[0] == first[0]
    assert out[1] == first[0] + " <SEP> " + first[1]


def test_config_defaults_and_override(tmp_path):
    corpus = tmp_path / "c.txt"
    corpus.write_text("a b\n", encoding="utf-8")
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\norder = 1\nadd-k=0.5\n", encoding="utf-8")
    lm = tmp_path / "lm.txt"
    assert run(["--config", str(cfg), "lm-train", "--corpus", str(corpus), "--out", str(lm)]) == 0
    assert lm.read_text(encoding="utf-8").splitlines()[0] == "zpaug-ngram v1\t1\t0.5"
    assert run(["--config", str(cfg), "lm-train", "--corpus", str(corpus), "--order", "2", "--out", str(lm)]) == 0
    assert lm.read_text(encoding="utf-8").splitlines()[0] == "zpaug-ngram v1\t2\t0.5"


def test_bad_config_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("order 1\n", encoding="utf-8")
    assert run(["--config", str(cfg), "compile-patterns", "--out", str(tmp_path / "p")]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["no-such-command"],
        ["bleu", "--hyp", "x"],
        ["lm-train", "--corpus", "x", "--order", "three", "--out", "y"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert run(argv) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_input_exit_2(tmp_path, capsys):
    assert run(["bleu", "--hyp", str(tmp_path / "nope"), "--ref", str(tmp_path / "nope")]) == 2
    assert "--hyp" in capsys.readouterr().err


def test_missing_output_dir_exit_2(data_dir, tmp_path):
    d = data_dir / "augment"
    argv = ["augment", "--ja", str(d / "ja.txt"), "--en", str(d / "en.txt"),
            "--out-prefix", str(tmp_path / "missing" / "aug")]
    assert run(argv) == 2


def test_malformed_input_exit_1(tmp_path, capsys):
    ja, en = tmp_path / "a.ja", tmp_path / "a.en"
    ja.write_text("一\n二\n", encoding="utf-8")
    en.write_text("one\n", encoding="utf-8")
    assert run(["align-train", "--ja", str(ja), "--en", str(en), "--out", str(tmp_path / "t")]) == 1
    assert "error" in capsys.readouterr().err


def test_bleu_length_mismatch_exit_1(tmp_path):
    h, r = tmp_path / "h", tmp_path / "r"
    h.write_text("a\nb\n", encoding="utf-8")
    r.write_text("a\n", encoding="utf-8")
    assert run(["bleu", "--hyp", str(h), "--ref", str(r)]) == 1
