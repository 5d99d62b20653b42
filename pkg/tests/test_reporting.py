import json
import os
import tempfile
import unittest

import pandas as pd
from pandas.testing import assert_frame_equal

from cusplab.reporting import (Report, canonical_json, create_metadata, export_excel, inputs_digest,
                               pd_to_json_dtype, render_json, render_text)


class TestReport(unittest.TestCase):
    def setUp(self):
        self.report = Report(command='weyl', inputs={'n': 2, 'seed': 0}, seed=0)

    def test_check_records_failures_in_order(self):
        self.assertTrue(self.report.check('first', True))
        self.assertFalse(self.report.check('second', False))
        self.report.check('third', False)
        self.assertEqual(self.report.failures, ['second', 'third'])
        self.assertFalse(self.report.passed)

    def test_passed_when_no_failures(self):
        self.report.check('ok', True)
        self.assertTrue(self.report.passed)

    def test_digest_ignores_key_order(self):
        self.assertEqual(inputs_digest({'a': 1, 'b': [1, 2]}), inputs_digest({'b': [1, 2], 'a': 1}))
        self.assertNotEqual(inputs_digest({'a': 1}), inputs_digest({'a': 2}))
        self.assertEqual(len(inputs_digest({})), 64)
        self.assertEqual(canonical_json({'b': 1, 'a': 2}), '{"a":2,"b":1}')

    def test_render_json(self):
        self.report.results['2'] = {'a3_flipped': True}
        data = json.loads(render_json(self.report))
        self.assertEqual(data['command'], 'weyl')
        self.assertEqual(data['inputs_digest'], inputs_digest(self.report.inputs))
        self.assertTrue(data['passed'])
        self.assertEqual(data['results']['2'], {'a3_flipped': True})

    def test_render_text(self):
        self.report.frames['weyl'] = pd.DataFrame([{'n': 2, 'r': 6}])
        self.report.frames['empty'] = pd.DataFrame()
        text = render_text(self.report)
        self.assertIn('== weyl ==', text)
        self.assertIn('(empty)', text)
        self.assertTrue(text.endswith('PASSED'))
        self.report.check('parity n=2', False)
        self.assertTrue(render_text(self.report).endswith('FAILED: parity n=2'))


class TestMetadata(unittest.TestCase):
    def test_dtypes(self):
        self.assertEqual(pd_to_json_dtype(pd.Series([True]).dtype), 'boolean')
        self.assertEqual(pd_to_json_dtype(pd.Series([1.5]).dtype), 'number')
        self.assertEqual(pd_to_json_dtype(pd.Series(['x']).dtype), 'string')

    def test_create_metadata(self):
        frame = pd.DataFrame({'name': ['g192'], 'dim': [4], 'irreducible': [True]})
        meta = create_metadata(frame, {'dim': {'unit': 'dimension'}})
        self.assertEqual(meta[0], {'name': 'name', 'dataType': 'string'})
        self.assertEqual(meta[1], {'name': 'dim', 'dataType': 'number', 'unit': 'dimension'})
        self.assertEqual(meta[2]['dataType'], 'boolean')


class TestExcelExport(unittest.TestCase):
    def test_sheets(self):
        report = Report(command='catalog', inputs={'seed': 0}, seed=0)
        report.frames['catalog'] = pd.DataFrame([{'name': 'g192', 'dim': 4}])
        report.check('broken', False)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'report.xlsx')
            export_excel(report, path)
            sheets = pd.read_excel(path, sheet_name=None)
        self.assertEqual(set(sheets), {'catalog', 'metadata', 'summary'})
        assert_frame_equal(sheets['catalog'], report.frames['catalog'])
        self.assertEqual(list(sheets['metadata']['name']), ['name', 'dim'])
        self.assertEqual(sheets['summary'].loc[0, 'failures'], 'broken')
        self.assertFalse(bool(sheets['summary'].loc[0, 'passed']))


if __name__ == '__main__':
    unittest.main()
