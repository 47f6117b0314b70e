"""Scikit-learn style front end for the tree extraction pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils import check_array

from .clustering import ClusterConfig, extract_tree_with_trace
from .geometry import BoundingBox, GeometryConfig
from .model import Field, Group, Layout, iter_leaves


def _as_layout(X) -> Layout:
    """Coerce fit input into a :class:`Layout`.

    Accepts a ``Layout``, a list or tuple of ``Field``, or an (n, 4)
    array-like of ``[x, y, w, h]`` rows; array rows get synthetic field
    ids ``f0 .. f{n-1}`` in row order.
    """
    if isinstance(X, Layout):
        return X
    if isinstance(X, (list, tuple)) and X and all(isinstance(f, Field) for f in X):
        return Layout(name="fit-input", fields=tuple(X))
    boxes = check_array(X, dtype=float, ensure_2d=True)
    if boxes.shape[1] != 4:
        raise ValueError(f"expected (n, 4) box rows [x, y, w, h], got shape {boxes.shape}")
    fields = tuple(
        Field(id=f"f{i}", bbox=BoundingBox(float(x), float(y), float(w), float(h)))
        for i, (x, y, w, h) in enumerate(boxes)
    )
    return Layout(name="fit-input", fields=fields)


class QueryTreeExtractor(ClusterMixin, BaseEstimator):
    """Cluster form fields into an ordered visual hierarchy.

    Fitting runs the recursive adaptive-radius merge over the field
    boxes. The full result is the grouping tree; for interoperability
    the estimator also exposes a flat, DBSCAN-style labelling where
    each field receives the index of the top-level branch that contains
    it.

    Parameters
    ----------
    align_tolerance : float, default=2.0
        Maximum offset between two edge coordinates that still counts
        as aligned.
    align_floor : float, default=0.5
        Lower clamp of the alignment divisor in the pair distance.
    epsilon_slack : float, default=1e-9
        Relative slack when comparing a distance to the merge radius.
    max_rounds : int or None, default=None
        Safety bound on merge rounds; ``None`` means ten times the
        field count.

    Attributes
    ----------
    tree_ : QueryTree
        The extracted hierarchy.
    labels_ : ndarray of shape (n_fields,)
        Top-level branch index per field, in input field order.
    epsilons_ : list of float
        The merge radius used in each round.
    n_rounds_ : int
        Number of merge rounds performed.

    Examples
    --------
    >>> boxes = [[0, 0, 10, 10], [12, 0, 10, 10], [0, 50, 10, 10], [12, 50, 10, 10]]
    >>> QueryTreeExtractor().fit_predict(boxes)
    array([0, 0, 1, 1])
    """

    def __init__(
        self,
        align_tolerance: float = 2.0,
        align_floor: float = 0.5,
        epsilon_slack: float = 1e-9,
        max_rounds: int | None = None,
    ):
        self.align_tolerance = align_tolerance
        self.align_floor = align_floor
        self.epsilon_slack = epsilon_slack
        self.max_rounds = max_rounds

    def fit(self, X, y=None):
        """Extract the grouping tree for the given fields.

        Parameters
        ----------
        X : Layout, sequence of Field, or array-like of shape (n, 4)
            The form to analyse.
        y : Ignored
            Present for scikit-learn API conformance.

        Returns
        -------
        self : QueryTreeExtractor
            The fitted estimator.
        """
        layout = _as_layout(X)
        cfg = ClusterConfig(
            geometry=GeometryConfig(self.align_tolerance, self.align_floor),
            epsilon_slack=self.epsilon_slack,
            max_rounds=self.max_rounds,
        )
        tree, trace = extract_tree_with_trace(layout, cfg)
        branch_of: dict[str, int] = {}
        if isinstance(tree.root, Group):
            for branch, child in enumerate(tree.root.children):
                for leaf in iter_leaves(child):
                    branch_of[leaf.field_id] = branch
        else:
            branch_of[tree.root.field_id] = 0
        self.tree_ = tree
        self.labels_ = np.array([branch_of[f.id] for f in layout.fields], dtype=int)
        self.epsilons_ = [r.epsilon for r in trace]
        self.n_rounds_ = len(trace)
        return self
