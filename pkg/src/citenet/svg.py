"""Minimal deterministic SVG document builder.

Every coordinate is formatted with two fixed decimals so identical inputs
always serialize to identical bytes.
"""

from __future__ import annotations

from pathlib import Path


def fmt(x: float) -> str:
    return f"{float(x):.2f}"


def escape(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


class SvgDoc:
    def __init__(self, width: int, height: int, background: str = "#ffffff"):
        self.width = int(width)
        self.height = int(height)
        self.parts: list[str] = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">',
            f'<rect x="0" y="0" width="{self.width}" height="{self.height}" '
            f'fill="{background}"/>',
        ]

    def element(self, tag: str, text: str | None = None, **attrs) -> None:
        rendered = " ".join(
            f'{k.replace("_", "-")}="{escape(v)}"' for k, v in attrs.items()
        )
        if text is None:
            self.parts.append(f"<{tag} {rendered}/>")
        else:
            self.parts.append(f"<{tag} {rendered}>{escape(text)}</{tag}>")

    def rect(self, x, y, w, h, fill, **attrs) -> None:
        self.element(
            "rect", x=fmt(x), y=fmt(y), width=fmt(w), height=fmt(h), fill=fill, **attrs
        )

    def line(self, x1, y1, x2, y2, stroke="#000000", width=1.0, **attrs) -> None:
        self.element(
            "line",
            x1=fmt(x1), y1=fmt(y1), x2=fmt(x2), y2=fmt(y2),
            stroke=stroke, stroke_width=fmt(width), **attrs,
        )

    def circle(self, cx, cy, r, fill, **attrs) -> None:
        self.element("circle", cx=fmt(cx), cy=fmt(cy), r=fmt(r), fill=fill, **attrs)

    def path(self, d: str, fill="none", stroke="none", width=1.0, **attrs) -> None:
        self.element(
            "path", d=d, fill=fill, stroke=stroke, stroke_width=fmt(width), **attrs
        )

    def polyline(self, points, stroke, width=2.0, **attrs) -> None:
        joined = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)
        self.element(
            "polyline", points=joined, fill="none", stroke=stroke,
            stroke_width=fmt(width), **attrs,
        )

    def text(self, x, y, content, size=12, anchor="start", fill="#000000", **attrs) -> None:
        self.element(
            "text", text=content, x=fmt(x), y=fmt(y),
            font_size=str(int(size)), text_anchor=anchor, fill=fill,
            font_family="sans-serif", **attrs,
        )

    def tostring(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"

    def write(self, path: Path | str) -> None:
        path = Path(path)
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.tostring(), encoding="utf-8")
