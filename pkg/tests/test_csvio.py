import numpy as np
import pytest

from excitonprobe.csvio import (
    CSV_HEADER,
    FANO_CSV_HEADER,
    read_spectrum_csv,
    write_spectrum_csv,
    write_fano_csv,
)
from excitonprobe.fano import FanoFit


@pytest.fixture()
def csv_path(baseline_spectrum, tmp_path):
    path = tmp_path / "baseline.csv"
    write_spectrum_csv(str(path), baseline_spectrum)
    return str(path)


class TestRoundTrip:
    def test_grid_survives(self, baseline_spectrum, csv_path):
        back = read_spectrum_csv(csv_path)
        g0, g1 = baseline_spectrum.grid, back.grid
        assert g1.n_points == g0.n_points
        assert g1.e_min == pytest.approx(g0.e_min, abs=1e-9)
        assert g1.e_max == pytest.approx(g0.e_max, abs=1e-9)

    def test_columns_survive(self, baseline_spectrum, csv_path):
        back = read_spectrum_csv(csv_path)
        assert np.allclose(back.T, baseline_spectrum.T, rtol=0, atol=5e-12)
        assert np.allclose(back.R, baseline_spectrum.R, rtol=0, atol=5e-12)
        assert np.allclose(back.A_total, baseline_spectrum.A_total, rtol=0, atol=5e-12)
        for name in ("sink", "dephasing", "ohmic"):
            assert np.allclose(
                back.A_channels[name], baseline_spectrum.A_channels[name],
                rtol=0, atol=5e-12,
            )

    def test_metadata_survives(self, baseline_spectrum, csv_path):
        back = read_spectrum_csv(csv_path)
        md = back.metadata
        assert md["solver"] == "closed_form"
        assert md["v_g"] == 1.0
        assert md["g1"] == 10.0
        assert md["g6"] == 10.0
        assert md["g1_over_g6"] == 1.0
        assert str(md["network_hash"]) == baseline_spectrum.metadata["network_hash"]

    def test_read_arrays_are_read_only(self, csv_path):
        back = read_spectrum_csv(csv_path)
        with pytest.raises(ValueError):
            back.T[0] = 2.0


class TestDeterminism:
    def test_identical_bytes_on_rewrite(self, baseline_spectrum, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        write_spectrum_csv(str(a), baseline_spectrum)
        write_spectrum_csv(str(b), baseline_spectrum)
        assert a.read_bytes() == b.read_bytes()

    def test_unix_newlines(self, csv_path):
        raw = open(csv_path, "rb").read()
        assert b"\r" not in raw


class TestReaderValidation:
    def test_missing_header(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1,2,3\n")
        with pytest.raises(ValueError, match="expected header"):
            read_spectrum_csv(str(p))

    def test_wrong_column_count_names_line(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text(CSV_HEADER + "\n1,2,3\n")
        with pytest.raises(ValueError, match=r"bad\.csv:2.*7 columns"):
            read_spectrum_csv(str(p))

    def test_non_numeric_value_names_line(self, tmp_path):
        p = tmp_path / "bad.csv"
        row = ",".join(["1"] + ["oops"] + ["0"] * 5)
        p.write_text(CSV_HEADER + "\n" + row + "\n")
        with pytest.raises(ValueError, match=r"bad\.csv:2.*non-numeric"):
            read_spectrum_csv(str(p))

    def test_too_few_rows(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text(CSV_HEADER + "\n" + ",".join("1234567") + "\n")
        with pytest.raises(ValueError, match="at least 2 data rows"):
            read_spectrum_csv(str(p))

    def test_non_uniform_grid_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        rows = [CSV_HEADER]
        for e in (0.0, 1.0, 3.5):
            rows.append(",".join([str(e)] + ["0"] * 6))
        p.write_text("\n".join(rows) + "\n")
        with pytest.raises(ValueError, match="uniform increasing grid"):
            read_spectrum_csv(str(p))

    def test_decreasing_grid_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        rows = [CSV_HEADER]
        for e in (2.0, 1.0, 0.0):
            rows.append(",".join([str(e)] + ["0"] * 6))
        p.write_text("\n".join(rows) + "\n")
        with pytest.raises(ValueError, match="uniform increasing grid"):
            read_spectrum_csv(str(p))


class TestFanoCsv:
    def test_rows_and_header(self, tmp_path):
        fit = FanoFit(q=1.5, e_res=600.0, gamma_w=25.0, t_bg=0.8,
                      residual=1e-9, converged=True, iterations=12)
        p = tmp_path / "fits.csv"
        write_fano_csv(str(p), [("window-1", fit)])
        lines = p.read_text().splitlines()
        assert lines[0] == FANO_CSV_HEADER
        assert lines[1].startswith("window-1,")
        assert lines[1].endswith(",true")
        assert len(lines) == 2
