"""Minimal deterministic SVG line charts (no plotting dependency).

Fixed 720x480 canvas, linear or log10 y axis, optional horizontal guide
lines and a simple legend. Output is a plain function of the inputs, so
charts are byte-identical across runs.
"""
import math

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 40, 55

PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
]


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo: float, hi: float, n: int = 6):
    """Round tick positions covering [lo, hi]."""
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= m * mag:
            step = m * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def line_chart(
    series,
    x_label: str,
    y_label: str,
    title: str = "",
    y_log: bool = False,
    guides=(),
) -> str:
    """Render [(label, xs, ys), ...] to an SVG string.

    With y_log=True, nonpositive y values are dropped from their series.
    `guides` is an iterable of horizontal y positions (drawn dashed).
    """
    pts = []
    for _, xs, ys in series:
        for x, y in zip(xs, ys):
            if y_log and y <= 0:
                continue
            pts.append((float(x), float(y)))
    for g in guides:
        if not (y_log and g <= 0) and pts:
            pts.append((pts[0][0], float(g)))
    if not pts:
        raise ValueError("nothing to plot")

    xs_all = [p[0] for p in pts]
    ys_all = [math.log10(p[1]) if y_log else p[1] for p in pts]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    if y_log:
        y_lo, y_hi = math.floor(y_lo), math.ceil(y_hi)
    pad = 0.02 * (x_hi - x_lo)
    x_lo, x_hi = x_lo - pad, x_hi + pad

    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        v = math.log10(y) if y_log else y
        return MARGIN_T + (y_hi - v) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>',
    ]
    if title:
        out.append(
            f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
            f'font-size="14">{title}</text>'
        )

    for t in _ticks(x_lo, x_hi):
        x = sx(t)
        out.append(
            f'<line x1="{_fmt(x)}" y1="{MARGIN_T + ph}" x2="{_fmt(x)}" '
            f'y2="{MARGIN_T + ph + 5}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(x)}" y="{MARGIN_T + ph + 20}" '
            f'text-anchor="middle">{_fmt(t)}</text>'
        )
    y_ticks = range(int(y_lo), int(y_hi) + 1) if y_log else _ticks(y_lo, y_hi)
    for t in y_ticks:
        y = MARGIN_T + (y_hi - t) / (y_hi - y_lo) * ph
        label = f"1e{t}" if y_log else _fmt(t)
        out.append(
            f'<line x1="{MARGIN_L - 5}" y1="{_fmt(y)}" x2="{MARGIN_L}" '
            f'y2="{_fmt(y)}" stroke="black"/>'
        )
        out.append(
            f'<text x="{MARGIN_L - 8}" y="{_fmt(y + 4)}" '
            f'text-anchor="end">{label}</text>'
        )
    out.append(
        f'<text x="{MARGIN_L + pw // 2}" y="{HEIGHT - 12}" '
        f'text-anchor="middle">{x_label}</text>'
    )
    out.append(
        f'<text x="18" y="{MARGIN_T + ph // 2}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_T + ph // 2})">{y_label}</text>'
    )

    for g in guides:
        if y_log and g <= 0:
            continue
        y = sy(g)
        out.append(
            f'<line x1="{MARGIN_L}" y1="{_fmt(y)}" x2="{MARGIN_L + pw}" '
            f'y2="{_fmt(y)}" stroke="#555555" stroke-dasharray="6 4"/>'
        )

    for i, (label, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        coords = [
            f"{_fmt(sx(float(x)))},{_fmt(sy(float(y)))}"
            for x, y in zip(xs, ys)
            if not (y_log and y <= 0)
        ]
        if coords:
            out.append(
                f'<polyline points="{" ".join(coords)}" fill="none" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
        ly = MARGIN_T + 14 + 16 * i
        lx = MARGIN_L + pw - 150
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        out.append(f'<text x="{lx + 30}" y="{ly}">{label}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_chart(path, *args, **kwargs) -> None:
    with open(path, "w") as fh:
        fh.write(line_chart(*args, **kwargs))
