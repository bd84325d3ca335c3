from picube import ExperimentRow, render_error_figures

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_render_error_figures_writes_two_pngs(tmp_path):
    rows = [
        ExperimentRow("tensor", 3, 9, 1e-2, 1e10),
        ExperimentRow("tensor", 5, 16, 1e-4, 1e10),
        ExperimentRow("eliminated", 3, 7, 1.3e-2, 1e10),
        ExperimentRow("eliminated", 5, 12, 1.1e-4, 1e10),
    ]
    stem = tmp_path / "exp_T2"
    paths = render_error_figures(rows, stem, "T2")
    assert paths == [f"{stem}_error_vs_degree.png", f"{stem}_error_vs_points.png"]
    for path in paths:
        data = open(path, "rb").read()
        assert data.startswith(PNG_MAGIC)
        assert len(data) > 1000


def test_render_handles_single_family(tmp_path):
    rows = [ExperimentRow("tensor", 3, 9, 1e-2, 1.0)]
    paths = render_error_figures(rows, tmp_path / "solo", "C2")
    assert len(paths) == 2
