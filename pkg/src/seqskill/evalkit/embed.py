"""Two-dimensional latent-space export for qualitative inspection."""

import csv

import numpy as np

from ..errors import InputError


def embed_2d(latents, sources, method: str = "pca"):
    """Project latent vectors to 2-D coordinates, preserving source tags.

    PCA (default) is deterministic: components carry a fixed sign
    convention. Degenerate all-identical inputs are flagged and placed at
    the origin. Returns (coords (N, 2), info dict).
    """
    X = np.asarray(latents, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 3:
        raise InputError("need at least 3 latent vectors")
    if len(sources) != X.shape[0]:
        raise InputError("sources must align with latents")
    centered = X - X.mean(axis=0)
    if not np.any(np.abs(centered) > 1e-12):
        return np.zeros((X.shape[0], 2)), {"method": method, "degenerate": True}
    if method == "pca":
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        comps = vt[:2]
        # sign convention: largest-magnitude loading positive
        for i in range(comps.shape[0]):
            j = int(np.argmax(np.abs(comps[i])))
            if comps[i, j] < 0:
                comps[i] = -comps[i]
        coords = centered @ comps.T
        if coords.shape[1] < 2:
            coords = np.column_stack([coords, np.zeros(len(coords))])
        return coords, {"method": "pca", "degenerate": False,
                        "explained": (s[:2] ** 2 / (s**2).sum()).tolist()}
    if method == "tsne":
        try:
            from sklearn.manifold import TSNE
        except ImportError as exc:
            raise InputError("tsne requires scikit-learn") from exc
        coords = TSNE(n_components=2, random_state=0, init="pca").fit_transform(X)
        return np.asarray(coords, dtype=np.float64), {
            "method": "tsne",
            "degenerate": False,
        }
    raise InputError(f"unknown reduction method {method!r}")


def write_embedding_csv(path, coords, sources, labels=None) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "source", "label"])
        for i in range(len(coords)):
            writer.writerow(
                [
                    f"{coords[i, 0]:.10g}",
                    f"{coords[i, 1]:.10g}",
                    sources[i],
                    "" if labels is None else labels[i],
                ]
            )


def write_embedding_png(path, coords, sources, labels=None) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 5))
    sources = np.asarray(sources)
    markers = {"video": "o", "text": "s", "robot": "^"}
    labels_arr = None if labels is None else np.asarray(labels)
    for src in dict.fromkeys(sources.tolist()):
        sel = sources == src
        color = None
        if labels_arr is not None:
            color = labels_arr[sel]
        ax.scatter(
            coords[sel, 0],
            coords[sel, 1],
            marker=markers.get(src, "o"),
            label=src,
            c=color,
            cmap="tab10",
            alpha=0.8,
        )
    ax.legend()
    ax.set_xlabel("component 1")
    ax.set_ylabel("component 2")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
