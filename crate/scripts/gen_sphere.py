"""Generate a closed triangulated sphere from a Fibonacci point set.

The convex hull of V well-spread points on a sphere has 2V - 4 triangles, so
V = 1542 yields 3080 triangles and 4620 edges. Triangles are oriented with
outward normals. Output uses the plain `.tri` list format read by `aimx`.
"""
import argparse

import numpy as np
from scipy.spatial import ConvexHull


def fibonacci_sphere(n, radius):
    i = np.arange(n) + 0.5
    phi = np.arccos(1.0 - 2.0 * i / n)
    theta = np.pi * (1.0 + 5.0 ** 0.5) * i
    pts = np.stack(
        [np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)], axis=1
    )
    return radius * pts


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=1542)
    ap.add_argument("--radius", type=float, default=0.5)
    ap.add_argument("out")
    args = ap.parse_args()

    pts = fibonacci_sphere(args.points, args.radius)
    hull = ConvexHull(pts)
    tris = []
    for simplex in hull.simplices:
        a, b, c = (int(v) for v in simplex)
        n = np.cross(pts[b] - pts[a], pts[c] - pts[a])
        if np.dot(n, pts[a] + pts[b] + pts[c]) < 0.0:
            b, c = c, b
        tris.append((a, b, c))
    tris.sort()

    with open(args.out, "w") as f:
        f.write(f"# fibonacci sphere, radius {args.radius} m, {len(pts)} vertices\n")
        f.write(f"{len(pts)} {len(tris)}\n")
        for p in pts:
            f.write(f"{p[0]:.17e} {p[1]:.17e} {p[2]:.17e}\n")
        for t in tris:
            f.write(f"{t[0]} {t[1]} {t[2]}\n")


if __name__ == "__main__":
    main()
