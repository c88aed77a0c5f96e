#!/usr/bin/env python3
# Copyright 2026 The Consent Audit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes EXIF fixtures with Pillow so the C++ parser is checked against an
independent writer. Output goes to tests/fixtures/exif/ and is committed."""

import io
import json
import pathlib

from PIL import Image, TiffImagePlugin

OUT = pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "exif"

CASES = {
    "test": "Test",
    "acme": "(c) ACME Photo 2020",
    "long": "Copyright 2019 Jane Photographer, all rights reserved.",
    "dual": "Jane Doe\0Editor Co",
    "tiny": "ABC",
}


def tiff_bytes(value, prefix):
    ifd = TiffImagePlugin.ImageFileDirectory_v2(prefix=prefix)
    ifd[0x010F] = "CameraMaker"  # Make, so Copyright is not the only entry
    ifd[0x8298] = value
    ifd.tagtype[0x8298] = 2
    return prefix + (b"\x00\x2a" if prefix == b"MM" else b"\x2a\x00") + (
        (8).to_bytes(4, "big" if prefix == b"MM" else "little")) + ifd.tobytes(offset=8)


def jpeg_bytes(exif_payload):
    buf = io.BytesIO()
    Image.new("RGB", (4, 4), (200, 10, 10)).save(buf, "JPEG", exif=exif_payload)
    return buf.getvalue()


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    manifest = []
    for name, value in CASES.items():
        expected = value.split("\0")[0]
        for prefix, tag in ((b"II", "le"), (b"MM", "be")):
            tiff = tiff_bytes(value, prefix)
            (OUT / f"{name}_{tag}.tif").write_bytes(tiff)
            (OUT / f"{name}_{tag}.jpg").write_bytes(jpeg_bytes(b"Exif\0\0" + tiff))
            manifest.append({"file": f"{name}_{tag}.tif", "copyright": expected})
            manifest.append({"file": f"{name}_{tag}.jpg", "copyright": expected})
    buf = io.BytesIO()
    Image.new("RGB", (4, 4)).save(buf, "JPEG")
    (OUT / "no_app1.jpg").write_bytes(buf.getvalue())
    manifest.append({"file": "no_app1.jpg", "copyright": None})
    no_tag = TiffImagePlugin.ImageFileDirectory_v2(prefix=b"II")
    no_tag[0x010F] = "CameraMaker"
    (OUT / "no_copyright_le.jpg").write_bytes(
        jpeg_bytes(b"Exif\0\0II\x2a\x00\x08\x00\x00\x00" + no_tag.tobytes(offset=8)))
    manifest.append({"file": "no_copyright_le.jpg", "copyright": None})
    (OUT / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")


if __name__ == "__main__":
    main()
