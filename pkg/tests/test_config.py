from __future__ import annotations

import json
import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from evenartin.config import (
    DEFAULT_MAX_SYLLABLES,
    Settings,
    apply_settings,
    default_config_path,
    length_cap,
    load_settings,
    set_length_cap,
    with_overrides,
)


class ConfigTest(unittest.TestCase):
    def setUp(self) -> None:
        self._td = tempfile.TemporaryDirectory()
        self.home = Path(self._td.name)
        self._env = patch.dict(os.environ, {"EVENARTIN_HOME": str(self.home)}, clear=False)
        self._env.start()
        os.environ.pop("EVENARTIN_LOG_LEVEL", None)
        os.environ.pop("EVENARTIN_MAX_SYLLABLES", None)

    def tearDown(self) -> None:
        self._env.stop()
        self._td.cleanup()
        set_length_cap(DEFAULT_MAX_SYLLABLES)

    def test_defaults_without_a_file(self) -> None:
        s = load_settings()
        self.assertEqual(s, Settings())
        self.assertEqual(default_config_path(), self.home.resolve() / "evenartin.config.json")

    def test_file_values_are_clamped(self) -> None:
        p = self.home / "cfg.json"
        p.write_text(
            json.dumps({"max_syllables": 0, "oracle_radius": 500, "log_level": "debug", "selftest": {"cases": 7, "bogus": 1}}),
            encoding="utf-8",
        )
        s = load_settings(p)
        self.assertEqual(s.max_syllables, 1)
        self.assertEqual(s.oracle_radius, 64)
        self.assertEqual(s.log_level, "DEBUG")
        self.assertEqual(s.selftest["cases"], 7)
        self.assertNotIn("bogus", s.selftest)

    def test_env_overrides_file(self) -> None:
        p = self.home / "evenartin.config.json"
        p.write_text(json.dumps({"log_level": "INFO", "max_syllables": 50}), encoding="utf-8")
        with patch.dict(os.environ, {"EVENARTIN_LOG_LEVEL": "error", "EVENARTIN_MAX_SYLLABLES": "75"}):
            s = load_settings()
        self.assertEqual(s.log_level, "ERROR")
        self.assertEqual(s.max_syllables, 75)

    def test_unknown_log_level_falls_back(self) -> None:
        p = self.home / "cfg.json"
        p.write_text(json.dumps({"log_level": "chatty"}), encoding="utf-8")
        self.assertEqual(load_settings(p).log_level, "WARNING")

    def test_overrides_and_apply(self) -> None:
        s = with_overrides(Settings(), max_syllables=12, log_level="info")
        self.assertEqual((s.max_syllables, s.log_level), (12, "INFO"))
        self.assertEqual(with_overrides(s, log_level="nope").log_level, "INFO")
        apply_settings(s)
        self.assertEqual(length_cap(), 12)
        self.assertEqual(s.as_dict()["selftest"], Settings().selftest)


if __name__ == "__main__":
    unittest.main()
