"""Regenerates the JPEG fixtures. Needs Pillow.

    python3 make_fixtures.py
"""

import json
import struct
from pathlib import Path

from PIL import Image

HERE = Path(__file__).resolve().parent
QUALITIES = [50, 75, 90, 100]
SUBSAMPLING = {0: "4:4:4", 1: "4:2:2", 2: "4:2:0"}


def scene():
    w, h = 64, 48
    img = Image.new("RGB", (w, h))
    img.putdata([((x * 4) % 256, (y * 5) % 256, (x * y) % 256) for y in range(h) for x in range(w)])
    return img


def segments(data):
    """(marker, offset, length) of each marker segment before SOS."""
    out, i = [], 2
    while i < len(data):
        marker = data[i + 1]
        length = struct.unpack(">H", data[i + 2 : i + 4])[0]
        out.append((marker, i, length))
        if marker == 0xDA:
            break
        i += 2 + length
    return out


def main():
    img = scene()
    expected = []
    for q in QUALITIES:
        for s, label in SUBSAMPLING.items():
            name = f"q{q}_s{label.replace(':', '')}.jpg"
            img.save(HERE / name, quality=q, subsampling=s)
            with Image.open(HERE / name) as back:
                # Pillow reports tables in natural (row-major) order
                tables = {str(k): list(v) for k, v in back.quantization.items()}
            expected.append({"file": name, "quality": q, "subsampling": label, "pillow_tables": tables})

    exif = Image.Exif()
    exif[0x0112] = 6
    img.save(HERE / "exif_orientation6.jpg", quality=75, exif=exif.tobytes())

    base = (HERE / "q75_s420.jpg").read_bytes()
    dqt = next(s for s in segments(base) if s[0] == 0xDB)
    bad = {
        "missing_soi.jpg": base[2:],
        # cut inside the first DQT payload
        "truncated_dqt.jpg": base[: dqt[1] + 4 + 20],
        # length field shorter than its own two bytes
        "bad_length_short.jpg": base[: dqt[1] + 2] + b"\x00\x01" + base[dqt[1] + 4 :],
        # length field running past the end of the file
        "bad_length_long.jpg": base[: dqt[1] + 2] + b"\xff\xf0" + base[dqt[1] + 4 : dqt[1] + 100],
        # DQT length that is not a whole number of tables
        "bad_dqt_length.jpg": base[: dqt[1] + 2]
        + struct.pack(">H", dqt[2] - 1)
        + base[dqt[1] + 4 : dqt[1] + 2 + dqt[2] - 1]
        + base[dqt[1] + 2 + dqt[2] :],
    }
    for name, data in bad.items():
        (HERE / name).write_bytes(data)

    lines = ",\n".join(json.dumps(e) for e in expected)
    (HERE / "expected.json").write_text(f"[\n{lines}\n]\n")


if __name__ == "__main__":
    main()
