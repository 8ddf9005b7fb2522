"""Array-backed sum tree for proportional sampling."""

from typing import Optional, Sequence

import numpy as np


class SumTree:
    """Complete binary tree whose internal nodes hold the sum of their children.

    The tree is a 1-based heap in one array: node ``i`` has children ``2i`` and
    ``2i+1`` and the ``leaf_count`` (a power of two) leaves live at
    ``leaf_count + index``. Parents are recomputed from their children on every
    update, so ``total`` always equals the sum of the leaves up to round-off of
    one addition per level.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = int(capacity)
        self.leaf_count = 1 << (self.capacity - 1).bit_length()
        self.depth = self.leaf_count.bit_length() - 1
        self.nodes = np.zeros(2 * self.leaf_count)

    def __len__(self) -> int:
        return self.capacity

    @property
    def total(self) -> float:
        return float(self.nodes[1])

    @property
    def leaves(self) -> np.ndarray:
        return self.nodes[self.leaf_count:self.leaf_count + self.capacity]

    def __getitem__(self, index: int) -> float:
        return float(self.nodes[self.leaf_count + index])

    def _check(self, index: int, priority: float) -> None:
        if not 0 <= index < self.capacity:
            raise IndexError(f"Leaf {index} out of range [0, {self.capacity})")
        if not np.isfinite(priority) or priority < 0:
            raise ValueError(f"Priority must be finite and >= 0, got {priority}")

    def update(self, index: int, priority: float) -> None:
        """Set one leaf and refresh its ancestors in ``O(log n)``."""
        self._check(index, priority)
        node = self.leaf_count + index
        self.nodes[node] = priority
        node //= 2
        while node >= 1:
            self.nodes[node] = self.nodes[2 * node] + self.nodes[2 * node + 1]
            node //= 2

    def rebuild(self, priorities: Optional[Sequence[float]] = None) -> None:
        """Replace all leaves (when given) and recompute every internal node level by level."""
        if priorities is not None:
            values = np.asarray(priorities, dtype=float)
            if values.shape != (self.capacity,):
                raise ValueError(f"Expected {self.capacity} priorities, got shape {values.shape}")
            if not np.all(np.isfinite(values)) or np.any(values < 0):
                raise ValueError("Priorities must be finite and >= 0")
            self.nodes[self.leaf_count:self.leaf_count + self.capacity] = values
            self.nodes[self.leaf_count + self.capacity:] = 0.0
        size = self.leaf_count // 2
        while size >= 1:
            self.nodes[size:2 * size] = self.nodes[2 * size:4 * size:2] + self.nodes[2 * size + 1:4 * size:2]
            size //= 2

    def find(self, values: np.ndarray) -> np.ndarray:
        """Leaf indices whose prefix-sum interval contains each value.

        A value ``v`` selects leaf ``i`` when ``sum(leaves[:i]) <= v < sum(leaves[:i+1])``.
        Empty right subtrees are never entered, so zero-priority leaves are never
        returned while the total is positive.
        """
        values = np.array(values, dtype=float, ndmin=1)
        nodes = np.ones(values.shape[0], dtype=np.int64)
        for _ in range(self.depth):
            left = 2 * nodes
            left_sum = self.nodes[left]
            go_left = (values < left_sum) | (self.nodes[left + 1] <= 0.0)
            values = np.where(go_left, values, values - left_sum)
            nodes = np.where(go_left, left, left + 1)
        return nodes - self.leaf_count

    def sample(self, batch: int, rng: np.random.Generator) -> np.ndarray:
        """Stratified draw: one uniform value in each of ``batch`` equal-mass segments."""
        total = self.total
        if total <= 0:
            raise ValueError("Cannot sample from a tree with zero total priority")
        segment = total / batch
        values = (np.arange(batch) + rng.random(batch)) * segment
        return self.find(np.minimum(values, np.nextafter(total, 0.0)))
