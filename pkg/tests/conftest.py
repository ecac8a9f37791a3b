from __future__ import annotations

import io
import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from adstory.taxonomy import Taxonomy, load_default_taxonomy


@pytest.fixture(scope="session")
def taxonomy() -> Taxonomy:
    return load_default_taxonomy()


def adframes_stream(width: int, height: int, fps: float, frames: list[bytes]) -> io.BytesIO:
    header = json.dumps(
        {"magic": "adframes1", "width": width, "height": height, "fps": fps, "pixfmt": "rgb24"}
    ).encode("utf-8")
    return io.BytesIO(header + b"\n" + b"".join(frames))
