import json

import numpy as np
import pytest

from fbst.core.engine import fbst
from fbst.core.reference import parse_reference
from fbst.data.draws_loader import DrawsFileSpec, load_draws, load_reference_table
from fbst.errors import InputError, OutputError
from fbst.output.result_writer import ResultDocument, format_summary, read_result, render_result, write_result

from conftest import FIXED_TIMESTAMP


def _write(path, text, newline="\n"):
    with open(path, "w", encoding="utf-8", newline=newline) as fh:
        fh.write(text)
    return path


def _csv(rows, header="delta,sigma"):
    return header + "\n" + "".join(f"{a},{b}\n" for a, b in rows)


ROWS = [(0.01 * i - 0.2, 1.0 + 0.001 * i) for i in range(40)]


# ══════════════════════════════════════════════════════════════════════
# Lecture des tirages
# ══════════════════════════════════════════════════════════════════════

def test_load_plain(tmp_path):
    path = _write(tmp_path / "chaine.txt", "".join(f"{v}\n" for v in np.arange(1.0, 41.0)) + "\n\n")
    sample = load_draws(DrawsFileSpec(str(path)))
    assert np.array_equal(sample.draws, np.arange(1.0, 41.0))
    assert sample.label == "chaine"


def test_load_plain_too_short(tmp_path):
    path = _write(tmp_path / "court.txt", "1.0\n2.0\n3.0")
    with pytest.raises(InputError, match="minimum"):
        load_draws(DrawsFileSpec(str(path), format="plain"))


def test_load_csv_named_column(tmp_path):
    path = _write(tmp_path / "draws.csv", _csv(ROWS))
    sample = load_draws(DrawsFileSpec(str(path), column="delta"))
    assert sample.label == "delta"
    assert np.allclose(sample.draws, [a for a, _ in ROWS])


def test_load_csv_index_and_crlf(tmp_path):
    path = _write(tmp_path / "draws.csv", _csv(ROWS), newline="\r\n")
    sample = load_draws(DrawsFileSpec(str(path), column=1))
    assert sample.label == "sigma"
    assert np.allclose(sample.draws, [b for _, b in ROWS])
    assert load_draws(DrawsFileSpec(str(path), column="1")).label == "sigma"


def test_load_csv_semicolon(tmp_path):
    path = _write(tmp_path / "draws.csv", _csv(ROWS).replace(",", ";"))
    assert load_draws(DrawsFileSpec(str(path), column="delta", delimiter=";")).n == len(ROWS)


def test_load_tsv_uses_tab_delimiter(tmp_path):
    path = _write(tmp_path / "draws.tsv", _csv(ROWS).replace(",", "\t"))
    spec = DrawsFileSpec(str(path), column="delta")
    assert spec.format == "csv" and spec.delimiter == "\t"
    sample = load_draws(spec)
    assert sample.n == len(ROWS) and sample.label == "delta"
    assert sample.draws[0] == pytest.approx(ROWS[0][0])


def test_load_csv_nan_names_line(tmp_path):
    lignes = _csv(ROWS).splitlines()
    lignes[5] = "NaN,1.0"
    path = _write(tmp_path / "draws.csv", "\n".join(lignes) + "\n")
    with pytest.raises(InputError, match="ligne 6"):
        load_draws(DrawsFileSpec(str(path), column="delta"))


def test_load_csv_bad_number_names_line(tmp_path):
    lignes = _csv(ROWS).splitlines()
    lignes[12] = "abc,1.0"
    path = _write(tmp_path / "draws.csv", "\n".join(lignes) + "\n")
    with pytest.raises(InputError, match="ligne 13"):
        load_draws(DrawsFileSpec(str(path), column="delta"))


def test_load_csv_column_errors(tmp_path):
    path = _write(tmp_path / "draws.csv", _csv(ROWS))
    with pytest.raises(InputError, match="introuvable"):
        load_draws(DrawsFileSpec(str(path), column="gamma"))
    with pytest.raises(InputError, match="colonne"):
        load_draws(DrawsFileSpec(str(path)))
    with pytest.raises(InputError):
        load_draws(DrawsFileSpec(str(path), column=7))


def test_load_csv_empty_column(tmp_path):
    path = _write(tmp_path / "draws.csv", "delta,sigma\n")
    with pytest.raises(InputError):
        load_draws(DrawsFileSpec(str(path), column="delta"))


def test_load_missing_file(tmp_path):
    with pytest.raises(InputError, match="introuvable"):
        load_draws(DrawsFileSpec(str(tmp_path / "absent.csv"), column="delta"))


def _permission_denied(*args, **kwargs):
    raise PermissionError(13, "Permission denied")


@pytest.mark.parametrize("name, cible", [
    ("draws.csv", "pandas.read_csv"),
    ("draws.txt", "pathlib.Path.read_text"),
    ("draws.json", "pathlib.Path.read_text"),
])
def test_unreadable_file_is_input_error(tmp_path, monkeypatch, name, cible):
    path = _write(tmp_path / name, "[]")
    monkeypatch.setattr(cible, _permission_denied)
    with pytest.raises(InputError, match="lecture impossible"):
        load_draws(DrawsFileSpec(str(path), column="delta"))


def test_load_json_array_and_object(tmp_path):
    valeurs = [0.1 * i for i in range(35)]
    tableau = _write(tmp_path / "tirages.json", json.dumps(valeurs))
    sample = load_draws(DrawsFileSpec(str(tableau)))
    assert sample.label == "tirages" and np.allclose(sample.draws, valeurs)

    objet = _write(tmp_path / "chaines.json", json.dumps({"delta": valeurs, "mu": valeurs}))
    assert load_draws(DrawsFileSpec(str(objet), column="mu")).label == "mu"
    with pytest.raises(InputError):
        load_draws(DrawsFileSpec(str(objet)))

    mauvais = _write(tmp_path / "mauvais.json", json.dumps(valeurs[:34] + ["x"]))
    with pytest.raises(InputError, match="élément 34"):
        load_draws(DrawsFileSpec(str(mauvais)))


def test_unknown_format():
    with pytest.raises(InputError):
        DrawsFileSpec("d.csv", format="parquet")


def test_reference_table(tmp_path):
    path = _write(tmp_path / "ref.csv", "theta,value\n-10,0.5\n0,1.5\n10,0.5\n")
    ref = load_reference_table(path)
    assert ref.kind == "tabulated"
    assert ref(5.0) == pytest.approx(1.0)
    assert parse_reference(f"table:{path}").describe() == f"table:{path}"

    mauvais = _write(tmp_path / "mauvais.csv", "theta,value\n0,1\n-1,1\n")
    with pytest.raises(InputError):
        load_reference_table(mauvais)
    with pytest.raises(InputError):
        parse_reference(f"table:{tmp_path / 'absent.csv'}")


# ══════════════════════════════════════════════════════════════════════
# Écriture des résultats
# ══════════════════════════════════════════════════════════════════════

def _document(**changes) -> ResultDocument:
    base = dict(
        e_value_against=0.8305998, e_value_in_favor=1 - 0.8305998, p_value=0.1461029,
        sev_against=1 - 0.0248695, sev=0.0248695, dim_theta=3, dim_null=2, null_value=0.0,
        reference_descriptor="flat", estimator="grid", label="delta", sample_size=4000,
        bandwidth=0.05, grid_size=1024, posterior_mode=-0.4, posterior_mode_density=1.2,
        null_posterior_density=0.4, s_star=0.4, relative_null_ratio=0.33,
        null_corroborated=None, corroborated_mass=None, tool_version="1.0.0", timestamp=FIXED_TIMESTAMP,
    )
    base.update(changes)
    return ResultDocument(**base)


def test_text_summary_block():
    assert format_summary(_document()).splitlines() == [
        "Full Bayesian Significance Test for testing a sharp hypothesis against its alternative:",
        "Reference function: Flat",
        "Testing Hypothesis H_0:Parameter= 0 against its alternative H_1",
        "Bayesian e-value against H_0: 0.8305998",
        "p-value associated with the Bayesian e-value in favour of the null hypothesis: 0.1461029",
        "Standardized e-value: 0.0248695",
    ]


def test_text_summary_user_defined_reference():
    texte = format_summary(_document(reference_descriptor="cauchy:location=0,scale=0.7071", null_value=0.25))
    assert "Reference function: User-defined" in texte
    assert "H_0:Parameter= 0.25 against" in texte


def test_json_roundtrip_file(tmp_path, small_sample):
    doc = ResultDocument.from_result(fbst(small_sample, 0.1, k=3, h=2))
    assert doc.timestamp == FIXED_TIMESTAMP
    path = tmp_path / "sortie" / "res.json"
    write_result(doc, path, "json")
    assert read_result(path) == doc
    assert b"\r\n" not in path.read_bytes()


def test_json_roundtrip_randomized():
    rng = np.random.default_rng(0)
    for i in range(1000):
        corrobore = [None, True, False][i % 3]
        doc = _document(
            e_value_against=float(rng.random()),
            p_value=float(rng.random()),
            sev=float(rng.random() ** 9),
            null_value=float(rng.normal(0, 1e3)),
            bandwidth=float(rng.lognormal()),
            sample_size=int(rng.integers(30, 10**7)),
            label=f"θ_{i}",
            null_corroborated=corrobore,
            corroborated_mass=None if corrobore is None else float(rng.random()),
        )
        assert ResultDocument.from_dict(json.loads(render_result(doc, "json"))) == doc


def test_text_file_and_write_failure(tmp_path):
    path = tmp_path / "res.txt"
    write_result(_document(), path, "text")
    assert path.read_text(encoding="utf-8") == format_summary(_document())
    with pytest.raises(OutputError):
        write_result(_document(), tmp_path, "text")


def test_read_result_errors(tmp_path):
    with pytest.raises(InputError):
        read_result(tmp_path / "absent.json")
    incomplet = _write(tmp_path / "incomplet.json", json.dumps({"sev": 0.1}))
    with pytest.raises(InputError):
        read_result(incomplet)
