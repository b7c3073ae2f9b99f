"""Regenerates crates/core/src/raster/atlas_data.rs from DejaVu Sans Mono.

Each printable ASCII glyph (0x20..=0x7E) is rendered into an 8x16 cell and
thresholded to one bit per pixel. Row bytes store the leftmost pixel in the
most significant bit.
"""
import sys
from PIL import Image, ImageDraw, ImageFont

FONT = "/usr/share/fonts/truetype/dejavu/DejaVuSansMono.ttf"
W, H = 8, 16

def render(font, ch):
    img = Image.new("L", (W, H), 0)
    d = ImageDraw.Draw(img)
    d.text((0, 12), ch, fill=255, font=font, anchor="ls")
    rows = []
    for y in range(H):
        b = 0
        for x in range(W):
            if img.getpixel((x, y)) >= 100:
                b |= 0x80 >> x
        rows.append(b)
    return rows

def main(out):
    font = ImageFont.truetype(FONT, 13)
    lines = [
        "// Generated by tools/gen_atlas.py from DejaVu Sans Mono. Do not edit.",
        "",
        "pub(super) static GLYPHS: [[u8; 16]; 95] = [",
    ]
    for code in range(0x20, 0x7F):
        rows = render(font, chr(code))
        body = ", ".join(f"0x{r:02X}" for r in rows)
        lines.append(f"    [{body}], // {chr(code)!r}")
    lines.append("];")
    with open(out, "w") as f:
        f.write("\n".join(lines) + "\n")

if __name__ == "__main__":
    main(sys.argv[1])
