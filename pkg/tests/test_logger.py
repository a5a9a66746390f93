"""Tests for qfiso/logger.py."""

# pylint: disable=missing-class-docstring, missing-function-docstring

import logging
import unittest

from qfiso.logger import LOGGER, LogLevel, SUB_LOGGER, set_level


class TestLogLevel(unittest.TestCase):

    def test_parse(self):
        self.assertEqual(LogLevel.parse('debug'), LogLevel.DEBUG)
        self.assertEqual(LogLevel.parse(' WARN '), LogLevel.WARN)
        with self.assertRaises(ValueError):
            LogLevel.parse('verbose')

    def test_str(self):
        self.assertEqual([str(level) for level in LogLevel],
                         ['debug', 'info', 'warn', 'error', 'fatal'])


class TestSetLevel(unittest.TestCase):

    def setUp(self):
        self.saved = (LOGGER.level, SUB_LOGGER('sweep').level)

    def tearDown(self):
        LOGGER.setLevel(self.saved[0])
        SUB_LOGGER('sweep').setLevel(self.saved[1])

    def test_sub_logger(self):
        set_level(LogLevel.ERROR, 'sweep')
        self.assertEqual(logging.getLogger('qfiso.sweep').level, logging.ERROR)
        self.assertEqual(LOGGER.level, self.saved[0])

    def test_package_logger(self):
        set_level(LogLevel.INFO)
        self.assertEqual(LOGGER.level, logging.INFO)


if __name__ == "__main__":
    unittest.main()
