from pathlib import Path

from azed.defaults import SAMPLE_STORY_TEXT


def test_repo_sample_matches_embedded_story():
    sample = Path(__file__).resolve().parent.parent / "samples" / "story.azee"
    assert sample.read_text(encoding="utf-8") == SAMPLE_STORY_TEXT
