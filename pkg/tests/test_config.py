import os
import unittest
from unittest.mock import patch

from cusplab import config


class TestConfig(unittest.TestCase):
    @patch.dict(os.environ, {}, clear=True)
    def test_defaults(self):
        self.assertEqual(config.max_conductor(), config.DEFAULT_MAX_CONDUCTOR)
        self.assertEqual(config.max_order(), config.DEFAULT_MAX_ORDER)
        self.assertEqual(config.default_seed(), 0)
        self.assertEqual(config.numeric_dps(), 30)

    @patch.dict(os.environ, {'CUSPLAB_MAX_CONDUCTOR': '24', 'CUSPLAB_MAX_ORDER': '100',
                             'CUSPLAB_SEED': '9', 'CUSPLAB_NUMERIC_DPS': '50'})
    def test_environment_overrides(self):
        self.assertEqual(config.max_conductor(), 24)
        self.assertEqual(config.max_order(), 100)
        self.assertEqual(config.default_seed(), 9)
        self.assertEqual(config.numeric_dps(), 50)

    @patch.dict(os.environ, {'CUSPLAB_SEED': 'abc'})
    def test_malformed_value(self):
        with self.assertRaises(ValueError):
            config.default_seed()


if __name__ == '__main__':
    unittest.main()
