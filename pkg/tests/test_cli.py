import io
import json
import os
import tempfile
import unittest
from unittest.mock import Mock, patch

import pandas as pd

from cusplab.cli import build_parser, main
from cusplab.exactla import CharPoly
from cusplab.exceptions import CyclotomicZeroDivisionError, SingularMatrixError
from cusplab.satake import IdentityResult, PlaceKind


def _run(argv):
    with patch('sys.stdout', new_callable=io.StringIO) as out:
        code = main(argv)
    return code, out.getvalue()


class TestParser(unittest.TestCase):
    def test_unknown_subcommand_exits_with_usage_error(self):
        with patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit) as cm:
                build_parser().parse_args(['frobnicate'])
        self.assertEqual(cm.exception.code, 2)

    def test_weyl_needs_n_or_all(self):
        with patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit):
                build_parser().parse_args(['weyl'])


class TestCommands(unittest.TestCase):
    def test_weyl_n1(self):
        code, out = _run(['weyl', '--n', '1', '--format', 'json'])
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertTrue(data['results']['1']['a3_flipped'])
        self.assertTrue(data['passed'])
        self.assertEqual(data['failures'], [])

    def test_weyl_out_of_range(self):
        code, _ = _run(['weyl', '--n', '12'])
        self.assertEqual(code, 2)

    def test_analyze_g192(self):
        code, out = _run(['analyze', '--group', 'g192', '--format', 'json'])
        self.assertEqual(code, 0)
        kable = json.loads(out)['results']['analysis']['kable']
        self.assertFalse(kable['wedge2_reducible'])
        self.assertFalse(kable['a_symplectic'] or kable['b_selftwist'] or kable['c_proper_orthogonal'])
        self.assertTrue(kable['equivalence_holds'])

    def test_satake_fuzz(self):
        code, out = _run(['satake', '--identity', 'P31a', '--trials', '25', '--seed', '7', '--format', 'json'])
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data['results']['P31a']['failures'], [])
        self.assertEqual(data['inputs']['seed'], 7)

    def test_kable_with_random_builds(self):
        code, out = _run(['kable', '--catalog', 's5std', '--fuzz', '2', '--seed', '5', '--format', 'json'])
        self.assertEqual(code, 0)
        results = json.loads(out)['results']
        self.assertEqual(len(results), 3)
        self.assertIn('s5std', results)
        self.assertEqual(len([k for k in results if k.startswith('fuzz')]), 2)
        self.assertTrue(all(r['equivalence_holds'] for r in results.values()))

    def test_input_errors_exit_2(self):
        self.assertEqual(_run(['kable', '--catalog', 'e8'])[0], 2)
        self.assertEqual(_run(['kable', '--fuzz', '-1'])[0], 2)
        self.assertEqual(_run(['satake', '--identity', 'P99'])[0], 2)
        self.assertEqual(_run(['satake', '--trials', '0'])[0], 2)

    def test_singular_user_group_exits_2(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'sing.json')
            with open(path, 'w') as file:
                json.dump({"name": "sing", "generators": [{"dim": 2, "rows": [[0, 0], [0, 1]]}]}, file)
            code, out = _run(['analyze', '--group', path, '--format', 'json'])
        self.assertEqual(code, 2)
        self.assertEqual(out, '')

    def test_arithmetic_errors_exit_1(self):
        for error in (SingularMatrixError, CyclotomicZeroDivisionError):
            with patch.dict('cusplab.cli.COMMANDS', {'catalog': Mock(side_effect=error('boom'))}):
                code, out = _run(['catalog', '--format', 'json'])
            self.assertEqual(code, 1)
            self.assertEqual(json.loads(out)['failures'], [f"{error.__name__}: boom"])

    @patch('cusplab.satake.verify_identity')
    def test_failed_check_exits_1(self, mock_verify):
        mock_verify.return_value = IdentityResult('P31a', PlaceKind.SPLIT, False, CharPoly([1, -1]), CharPoly([1, -2]))
        code, out = _run(['satake', '--identity', 'P31a', '--trials', '3', '--format', 'json'])
        self.assertEqual(code, 1)
        data = json.loads(out)
        self.assertFalse(data['passed'])
        self.assertEqual(data['failures'], ['identity P31a'])
        self.assertEqual(len(data['results']['P31a']['failures']), 3)

    def test_example_g192(self):
        code, out = _run(['example', 'g192', '--format', 'json'])
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data['results']['commutant_dims']['displayed_ABC'], 6)
        self.assertEqual([r['differing_entries'] for r in data['results']['wedge2_images']],
                         ['[]', '[]', '[(6, 1)]', '[]'])

    def test_catalog_listing_as_text(self):
        code, out = _run(['catalog'])
        self.assertEqual(code, 0)
        self.assertIn('sl25sym3', out)
        self.assertTrue(out.rstrip().endswith('PASSED'))


class TestReproducibility(unittest.TestCase):
    def test_same_seed_same_report(self):
        argv = ['satake', '--identity', 'P33', '--trials', '10', '--seed', '3', '--format', 'json']
        self.assertEqual(_run(argv)[1], _run(argv)[1])

    @patch.dict(os.environ, {'CUSPLAB_SEED': '5'})
    def test_seed_from_environment(self):
        _, out = _run(['weyl', '--n', '2', '--format', 'json'])
        self.assertEqual(json.loads(out)['seed'], 5)

    def test_excel_export(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'weyl.xlsx')
            code, _ = _run(['weyl', '--all', '--excel', path])
            self.assertEqual(code, 0)
            frame = pd.read_excel(path, sheet_name='weyl')
            self.assertEqual(list(frame['n']), list(range(1, 9)))
            summary = pd.read_excel(path, sheet_name='summary')
            self.assertTrue(bool(summary.loc[0, 'passed']))


if __name__ == '__main__':
    unittest.main()
