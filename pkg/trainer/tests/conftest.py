import json
import shutil
import subprocess

import pytest


@pytest.fixture(scope="session")
def synth_corpus(tmp_path_factory):
    """Two synthetic pages produced through the detection toolkit's CLI
    (the trainer consumes only its file formats), plus a manifest."""
    if shutil.which("badam") is None:
        pytest.skip("badam CLI not installed")
    root = tmp_path_factory.mktemp("corpus")
    subprocess.run(
        ["badam", "synth", "--pages", "2", "--seed", "77",
         "--out-dir", str(root), "--min-lines", "8", "--max-lines", "15"],
        check=True, capture_output=True)
    pages = [
        {"image": str(root / "images" / f"page_{i:04d}.png"),
         "xml": str(root / "pages" / f"page_{i:04d}.xml")}
        for i in range(2)
    ]
    manifest = root / "manifest.json"
    manifest.write_text(json.dumps({"pages": pages}))
    return {"root": root, "manifest": str(manifest), "pages": pages}
