#!/usr/bin/env python3
"""JPEG 2000 round trip through Pillow/OpenJPEG, for use as jp2_cmd.

usage: jp2_roundtrip.py IN.pgm OUT.pgm RATIO [SCRATCH_PREFIX]
"""
import sys

from PIL import Image


def main(argv):
    if len(argv) not in (4, 5):
        sys.stderr.write(__doc__)
        return 2
    src, dst, ratio = argv[1], argv[2], float(argv[3])
    scratch = (argv[4] if len(argv) == 5 else dst) + ".jp2"
    Image.open(src).convert("L").save(
        scratch, "JPEG2000", quality_mode="rates", quality_layers=[ratio], irreversible=True
    )
    with Image.open(scratch) as im:
        im.convert("L").save(dst, "PPM")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
