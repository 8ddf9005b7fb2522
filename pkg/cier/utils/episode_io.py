"""CSV readers and writers for episode logs, factor encodings and score series."""

import csv
import re
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

import numpy as np

from ..core.exceptions import DataError
from ..models.factors import EpisodeEncoding
from ..models.graph import CausalDataset
from ..models.transition import Transition

PathLike = Union[str, Path]
_ACTION = re.compile(r"^a(\d+)$")
_STATE = re.compile(r"^s(\d+)$")


def _indexed_columns(header: Sequence[str], pattern: "re.Pattern[str]") -> List[str]:
    found = sorted((int(m.group(1)), name) for name in header if (m := pattern.match(name)))
    if [i for i, _ in found] != list(range(len(found))):
        raise DataError(f"Columns {[n for _, n in found]} are not numbered 0..{len(found) - 1}")
    return [name for _, name in found]


def _float(row: Dict[str, str], column: str, line: int) -> float:
    try:
        return float(row[column])
    except (TypeError, ValueError):
        raise DataError(f"Line {line}: column {column!r} is not a number: {row.get(column)!r}")


def read_episodes_csv(file_path: PathLike) -> List[List[Transition]]:
    """Read an episode log with header ``episode,step,reward,done,a0..,s0..``.

    ``next_state`` is the state of the following row of the same episode; the
    last row of an episode repeats its own state.

    Returns:
        Transition lists, one per episode, in order of first appearance

    Raises:
        DataError: On missing columns or unparsable values
    """
    with open(file_path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        missing = [c for c in ("episode", "step", "reward", "done") if c not in header]
        if missing:
            raise DataError(f"{file_path}: missing columns {missing}")
        actions = _indexed_columns(header, _ACTION)
        states = _indexed_columns(header, _STATE)
        if not actions:
            raise DataError(f"{file_path}: no action columns a0..")

        rows: Dict[int, List[tuple]] = {}
        for line, row in enumerate(reader, start=2):
            episode = int(_float(row, "episode", line))
            done = row["done"].strip()
            if done not in ("0", "1"):
                raise DataError(f"Line {line}: done must be 0 or 1, got {done!r}")
            rows.setdefault(episode, []).append((
                int(_float(row, "step", line)),
                _float(row, "reward", line),
                done == "1",
                [_float(row, c, line) for c in actions],
                [_float(row, c, line) for c in states],
            ))

    episodes = []
    for episode, records in rows.items():
        transitions = []
        for i, (step, reward, done, action, state) in enumerate(records):
            next_state = records[i + 1][4] if i + 1 < len(records) else state
            transitions.append(Transition(state, action, reward, next_state, done, episode, step))
        episodes.append(transitions)
    return episodes


def write_episodes_csv(episodes: Iterable[Sequence[Transition]], file_path: PathLike) -> None:
    episodes = [list(e) for e in episodes if len(e)]
    if not episodes:
        raise DataError("No transitions to write")
    first = episodes[0][0]
    header = (["episode", "step", "reward", "done"]
              + [f"a{i}" for i in range(first.action.size)]
              + [f"s{i}" for i in range(first.state.size)])
    with open(file_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for episode in episodes:
            for t in episode:
                writer.writerow([t.episode_id, t.step_index, repr(t.reward), int(t.done),
                                 *map(repr, t.action.tolist()), *map(repr, t.state.tolist())])


def read_encodings_csv(file_path: PathLike) -> CausalDataset:
    """Read a factor encoding matrix ``episode,<factor columns>,outcome``.

    Factor columns keep their header names; the last column is the outcome.
    """
    with open(file_path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{file_path}: empty file")
        if len(header) < 3 or header[0] != "episode":
            raise DataError(f"{file_path}: expected header 'episode,<factors...>,<outcome>'")
        rows = [r for r in reader if r]
    if not rows:
        raise DataError(f"{file_path}: no rows")
    try:
        values = np.array([[float(v) for v in r] for r in rows])
    except ValueError as e:
        raise DataError(f"{file_path}: {e}")
    if values.shape[1] != len(header):
        raise DataError(f"{file_path}: rows do not match the header width {len(header)}")
    treatments = values[:, 1:-1]
    if not np.all(np.isin(treatments, (0.0, 1.0))):
        raise DataError(f"{file_path}: factor columns must be 0/1")
    return CausalDataset(
        treatments=treatments.astype(int),
        outcome=values[:, -1],
        names=header[1:],
        episode_ids=values[:, 0].astype(int).tolist(),
    )


def write_encodings_csv(encodings: Sequence[EpisodeEncoding], file_path: PathLike) -> None:
    if not encodings:
        raise DataError("No encodings to write")
    k_prime = len(encodings[0].U)
    with open(file_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["episode", *[f"U{k}" for k in range(k_prime)], "outcome"])
        for e in encodings:
            writer.writerow([e.episode_id, *[int(u) for u in e.U], repr(float(e.outcome))])


def write_scores_csv(scores: Sequence[float], file_path: PathLike) -> None:
    with open(file_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["episode", "score"])
        for episode, score in enumerate(scores):
            writer.writerow([episode, repr(float(score))])


def read_scores_csv(file_path: PathLike) -> List[float]:
    """Scores in episode order from an ``episode,score`` CSV."""
    with open(file_path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if not reader.fieldnames or "score" not in reader.fieldnames:
            raise DataError(f"{file_path}: missing 'score' column")
        rows = [(int(_float(r, "episode", i)) if "episode" in r else i - 2, _float(r, "score", i))
                for i, r in enumerate(reader, start=2)]
    return [score for _, score in sorted(rows, key=lambda r: r[0])]
