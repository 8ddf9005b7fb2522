"""Tests for the CSV readers and writers."""

import numpy as np
import pytest

from cier.core.exceptions import DataError
from cier.models.factors import EpisodeEncoding
from cier.utils.episode_io import (
    read_encodings_csv,
    read_episodes_csv,
    read_scores_csv,
    write_encodings_csv,
    write_episodes_csv,
    write_scores_csv,
)
from tests.conftest import make_transitions


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


@pytest.mark.unit
class TestEpisodeLogs:
    """Test cases for episode CSV logs."""

    def test_read_groups_episodes_and_links_states(self, tmp_path):
        path = write(tmp_path / "log.csv", (
            "episode,step,reward,done,a0,a1,s0\n"
            "0,0,1.0,0,0.1,0.2,5\n"
            "0,1,2.0,1,0.3,0.4,6\n"
            "1,0,0.5,1,-0.1,0.0,7\n"
        ))

        episodes = read_episodes_csv(path)

        assert [len(e) for e in episodes] == [2, 1]
        first = episodes[0][0]
        np.testing.assert_array_equal(first.action, [0.1, 0.2])
        np.testing.assert_array_equal(first.next_state, [6.0])
        np.testing.assert_array_equal(episodes[0][1].next_state, [6.0])
        assert episodes[0][1].done
        assert episodes[1][0].episode_id == 1

    def test_written_log_reads_back(self, tmp_path, episode_rows):
        episodes = [
            make_transitions(actions, episode_id=i, rewards=rewards, state_dim=1)
            for i, (actions, rewards) in enumerate(zip(episode_rows["actions"], episode_rows["rewards"]))
        ]
        path = str(tmp_path / "out.csv")
        write_episodes_csv(episodes, path)

        loaded = read_episodes_csv(path)

        assert [[t.reward for t in e] for e in loaded] == episode_rows["rewards"]
        np.testing.assert_allclose(loaded[0][2].action, [0.5, 0.6])

    def test_missing_columns(self, tmp_path):
        path = write(tmp_path / "log.csv", "episode,step,a0\n0,0,1\n")
        with pytest.raises(DataError, match="missing columns"):
            read_episodes_csv(path)

    def test_gap_in_action_columns(self, tmp_path):
        path = write(tmp_path / "log.csv", "episode,step,reward,done,a0,a2\n0,0,1,0,1,1\n")
        with pytest.raises(DataError, match="not numbered"):
            read_episodes_csv(path)

    @pytest.mark.parametrize("row,message", [("0,0,x,0,1", "not a number"), ("0,0,1,yes,1", "done must be")])
    def test_bad_values(self, tmp_path, row, message):
        path = write(tmp_path / "log.csv", f"episode,step,reward,done,a0\n{row}\n")
        with pytest.raises(DataError, match=message):
            read_episodes_csv(path)

    def test_nothing_to_write(self, tmp_path):
        with pytest.raises(DataError):
            write_episodes_csv([[]], str(tmp_path / "out.csv"))


@pytest.mark.unit
class TestEncodingsAndScores:
    """Test cases for encoding matrices and score series."""

    def test_read_encodings(self, tmp_path):
        path = write(tmp_path / "enc.csv", "episode,A,B,ret\n0,1,0,2.5\n1,0,1,-1\n")

        data = read_encodings_csv(path)

        assert data.names == ["A", "B", "ret"]
        np.testing.assert_array_equal(data.treatments, [[1, 0], [0, 1]])
        np.testing.assert_array_equal(data.outcome, [2.5, -1.0])
        assert data.episode_ids == [0, 1]

    def test_write_encodings(self, tmp_path):
        path = str(tmp_path / "enc.csv")
        write_encodings_csv([EpisodeEncoding(3, np.array([1, 0]), 1.5)], path)

        data = read_encodings_csv(path)

        assert data.names == ["U0", "U1", "outcome"]
        assert data.episode_ids == [3]

    @pytest.mark.parametrize("text,message", [
        ("", "empty"),
        ("id,A,y\n0,1,2\n", "expected header"),
        ("episode,A,y\n", "no rows"),
        ("episode,A,y\n0,2,1\n", "0/1"),
        ("episode,A,y\n0,1\n", "header width"),
    ])
    def test_invalid_encodings(self, tmp_path, text, message):
        path = write(tmp_path / "enc.csv", text)
        with pytest.raises(DataError, match=message):
            read_encodings_csv(path)

    def test_scores(self, tmp_path):
        path = str(tmp_path / "scores.csv")
        write_scores_csv([0.1, 2.0, -3.5], path)
        assert read_scores_csv(path) == [0.1, 2.0, -3.5]

    def test_scores_sorted_by_episode(self, tmp_path):
        path = write(tmp_path / "scores.csv", "episode,score\n1,5\n0,4\n")
        assert read_scores_csv(path) == [4.0, 5.0]

    def test_scores_column_required(self, tmp_path):
        path = write(tmp_path / "scores.csv", "episode,return\n0,1\n")
        with pytest.raises(DataError, match="score"):
            read_scores_csv(path)
