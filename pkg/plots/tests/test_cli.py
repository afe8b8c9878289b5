import json
import shutil
import subprocess
import sys

import pytest

from prism_plots.cli import main

HEADER = "algorithm,K,L,c,n,mean_rounds,max_rounds,q25,q75,stddev,incomplete"


@pytest.fixture
def aggregate_csv(tmp_path):
    rows = [
        "prism,128,5,1.5,200,70.0,98,68.0,72.0,1.5,0",
        "prism,128,5,2.5,200,91.0,126,89.0,93.0,1.5,0",
        "prism,256,5,1.5,200,80.0,112,78.0,82.0,1.5,0",
        "prism,256,5,2.5,200,104.0,144,102.0,106.0,1.5,0",
        "aloha,128,5,0.0,200,140.0,210,120.0,180.0,25.0,3",
        "aloha,256,5,0.0,200,160.0,240,140.0,200.0,25.0,4",
        "tdma,128,5,0.0,200,115.2,128,100.0,127.0,10.0,0",
        "tdma,256,5,0.0,200,230.4,256,200.0,255.0,20.0,0",
    ]
    path = tmp_path / "aggregate.csv"
    path.write_text("\n".join([HEADER] + rows) + "\n")
    return str(path)


def test_cli_renders_each_figure(aggregate_csv, tmp_path, capsys):
    for figure in ("heatmap_mean", "heatmap_max", "scaling_mean",
                   "scaling_max", "comparison"):
        out = tmp_path / f"{figure}.png"
        argv = ["--input", aggregate_csv, "--figure", figure, "--out", str(out)]
        if figure.startswith("scaling"):
            argv += ["--c", "1.5"]
        assert main(argv) == 0
        assert capsys.readouterr().out.strip() == str(out)
        assert out.stat().st_size > 0


def test_cli_missing_column_exits_nonzero(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("algorithm,K,L,c\nprism,64,3,2.0\n")
    code = main(["--input", str(path), "--figure", "comparison",
                 "--out", str(tmp_path / "c.png")])
    assert code == 2
    assert "mean_rounds" in capsys.readouterr().err


def test_cli_missing_file_exits_nonzero(tmp_path, capsys):
    code = main(["--input", str(tmp_path / "nope.csv"), "--figure", "comparison",
                 "--out", str(tmp_path / "c.png")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_cli_rejects_unknown_figure(aggregate_csv, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["--input", aggregate_csv, "--figure", "pie",
              "--out", str(tmp_path / "p.png")])
    assert exc.value.code == 2


@pytest.mark.skipif(shutil.which("prism") is None,
                    reason="prism CLI not installed")
def test_end_to_end_from_real_sweep(tmp_path):
    """Drive the experiment CLI, then render every figure from its CSV."""
    config = {
        "algorithms": ["prism", "aloha", "tdma"],
        "K_values": [32, 64],
        "L_values": [3],
        "c_values": [1.5, 2.5],
        "realizations": 5,
        "master_seed": 7,
    }
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(config))
    subprocess.run(["prism", "sweep", "--config", str(cfg),
                    "--out", str(tmp_path)], check=True)
    aggregate = tmp_path / "aggregate.csv"
    assert aggregate.exists()
    for figure in ("heatmap_mean", "heatmap_max", "scaling_mean",
                   "scaling_max", "comparison"):
        out = tmp_path / f"{figure}.png"
        argv = ["--input", str(aggregate), "--figure", figure, "--out", str(out)]
        if figure.startswith("scaling"):
            argv += ["--c", "1.5"]
        proc = subprocess.run([sys.executable, "-m", "prism_plots.cli"] + argv,
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert out.stat().st_size > 0

    from prism_plots import load_aggregate, relative_grid
    rows = load_aggregate(str(aggregate), "heatmap_mean")
    for metric in ("mean_rounds", "max_rounds"):
        _, _, grid = relative_grid(rows, metric)
        for row in grid:
            assert min(row) == 1.0
