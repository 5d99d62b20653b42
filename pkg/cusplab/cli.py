import argparse
import logging
import sys
from typing import List, Optional

import pandas as pd
from dotenv import load_dotenv

from cusplab import catalog, config
from cusplab.chars import constituent_degrees, wedge2_character
from cusplab.criteria import (
    INDUCED_TYPE, TENSOR_TYPE, asai_remark, classify_gl4_analogue, essential_selfduals, is_irreducible,
    kable_classify, kable_frame, quadratic_selftwists,
)
from cusplab.exactla import commutant, wedge2_basis
from cusplab.exceptions import CheckFailure, CuspLabError, InputError
from cusplab.reps import dual, wedge2
from cusplab.reporting import Report, export_excel, render_json, render_text
from cusplab.satake import IDENTITIES, PlaceKind, fuzz, list_identities, verify_identity
from cusplab.weyl import MAX_LEVI_N, w0_for_levi, weyl_frame

logging.basicConfig(level=logging.INFO)

EXAMPLES = ['g192', 's5chain', 'asai', 'intersections']
INTERSECTION_ENTRIES = ['ind(d8)', 'ind(sl23)', 'd8xq8', 'd8xsl23']


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['text', 'json'], default='text', help="Output format")
    common.add_argument('--seed', type=int, default=None, help="Seed for all randomness (default CUSPLAB_SEED or 0)")
    common.add_argument('--excel', metavar='PATH', default=None, help="Also write the report tables to an xlsx file")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('--verbose', action='store_true', help="Log progress at DEBUG level")
    verbosity.add_argument('--quiet', action='store_true', help="Only log errors")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog='cusplab', description="Exact checks for exterior squares of 4-dimensional representations")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('analyze', parents=[common], help="Run the criteria battery on one representation")
    p.add_argument('--group', required=True, help="Catalog entry, catalog group, or group JSON path")
    p.add_argument('--rep', default=None, help="Representation JSON path (generator images)")

    p = sub.add_parser('kable', parents=[common], help="Check the exterior square criterion over the catalog")
    p.add_argument('--catalog', nargs='+', default=['all'], help="'all' or catalog entry names")
    p.add_argument('--fuzz', type=int, default=0, metavar='N',
                   help="Also check N irreducible random builds drawn from the seed")

    p = sub.add_parser('example', parents=[common], help="Reproduce a worked example")
    p.add_argument('name', choices=EXAMPLES)

    p = sub.add_parser('satake', parents=[common], help="Fuzz the Satake parameter identities")
    p.add_argument('--identity', default='all', help="Identity name or 'all'")
    p.add_argument('--trials', type=int, default=1000)

    p = sub.add_parser('weyl', parents=[common], help="Action of w0 on the Levi simple roots in type D")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--n', type=int)
    group.add_argument('--all', action='store_true')

    sub.add_parser('catalog', parents=[common], help="List the catalog entries")
    return parser


def _set_verbosity(args) -> None:
    root = logging.getLogger()
    if args.verbose:
        root.setLevel(logging.DEBUG)
    elif args.quiet:
        root.setLevel(logging.ERROR)


# -- commands ---------------------------------------------------------------

def run_analyze(args, report: Report) -> None:
    rep = catalog.resolve(args.group, args.rep)
    irreducible = is_irreducible(rep)
    result = {'name': rep.name, 'dim': rep.dim, 'group_order': rep.group.order, 'irreducible': irreducible}
    if irreducible:
        result['selfdual_twists'] = [t.to_json() for t in essential_selfduals(rep)]
        result['quadratic_selftwists'] = [chi.to_json() for chi in quadratic_selftwists(rep)]
    if irreducible and rep.dim == 4:
        kable = kable_classify(rep, seed=report.seed)
        result['kable'] = kable.to_json()
        result['gl4_types'] = sorted(classify_gl4_analogue(rep, seed=report.seed))
        report.frames['kable'] = kable_frame([kable])
        report.check(f"equivalence:{rep.name}", kable.equivalence_holds)
    report.results['analysis'] = result


def run_kable(args, report: Report) -> None:
    names = catalog.names(dim=4) if args.catalog == ['all'] else args.catalog
    fuzzed = catalog.fuzz_representations(args.fuzz, seed=report.seed)
    entries = [(name, catalog.representation(name)) for name in names] + [(rep.name, rep) for rep in fuzzed]
    reports = []
    for name, rep in entries:
        kable = kable_classify(rep, seed=report.seed)
        reports.append(kable)
        report.results[name] = kable.to_json()
        report.check(f"equivalence:{name}", kable.equivalence_holds)
    report.frames['kable'] = kable_frame(reports)


def _example_g192(report: Report) -> None:
    rep = catalog.representation('g192')
    report.check('order 192', rep.group.order == 192)
    computed = list(wedge2(rep).generator_images)
    displayed = catalog.displayed_wedge2_images()
    labels = ['A', 'B', 'C', 'D']
    basis = [f"w{k + 1}=e{i + 1}^e{j + 1}" for k, (i, j) in enumerate(wedge2_basis(4))]
    rows = []
    for label, mine, theirs in zip(labels, computed, displayed):
        diffs = [(i + 1, j + 1) for i in range(6) for j in range(6) if mine[i, j] != theirs[i, j]]
        rows.append({'image': label, 'matches_displayed': not diffs, 'differing_entries': str(diffs)})
    report.results['wedge2_basis'] = basis
    report.results['wedge2_images'] = rows
    # the displayed C carries +1 at row 6, column 1 where wedge2(c) w1 = -w6
    report.check('wedge2 images', [r['differing_entries'] for r in rows] == ['[]', '[]', '[(6, 1)]', '[]'])
    dims = {
        'computed_ABC': commutant(computed[:3])[0], 'computed_ABCD': commutant(computed)[0],
        'displayed_ABC': commutant(displayed[:3])[0], 'displayed_ABCD': commutant(displayed)[0],
    }
    report.results['commutant_dims'] = dims
    report.check('commutant dims', dims == {'computed_ABC': 6, 'computed_ABCD': 1, 'displayed_ABC': 6, 'displayed_ABCD': 1})
    report.check('rho irreducible', is_irreducible(rep))
    report.check('no essential self-duality', not essential_selfduals(rep))
    report.check('no quadratic self-twist', not quadratic_selftwists(rep))
    kable = kable_classify(rep, seed=report.seed)
    report.check('wedge2 irreducible', not kable.wedge2_reducible)
    report.check('equivalence', kable.equivalence_holds)
    report.results['kable'] = kable.to_json()
    report.frames['wedge2_images'] = pd.DataFrame(rows, columns=['image', 'matches_displayed', 'differing_entries'])
    report.frames['kable'] = kable_frame([kable])


def _example_s5chain(report: Report) -> None:
    s5 = catalog.representation('s5std')
    a5 = catalog.representation('a5std')
    w_s5 = wedge2_character(s5.character)
    w_a5 = wedge2_character(a5.character)
    rows = [
        {'check': 'norm of wedge2 on S5', 'value': str(w_s5.norm()), 'expected': '1'},
        {'check': 'norm of wedge2 on A5', 'value': str(w_a5.norm()), 'expected': '2'},
    ]
    degrees = constituent_degrees(w_a5)
    rows.append({'check': 'wedge2 degrees on A5', 'value': str(degrees), 'expected': '[3, 3]'})
    for row in rows:
        report.check(row['check'], row['value'] == row['expected'])
    report.check('restriction to A5 irreducible', is_irreducible(a5))
    report.check('self-dual', dual(s5).character == s5.character)
    report.check('integer character values', all(v.is_rational() and v.to_fraction().denominator == 1 for v in s5.character.values))
    flags = classify_gl4_analogue(a5, seed=report.seed)
    report.check('A5 restriction has tensor type', TENSOR_TYPE in flags)
    report.results['checks'] = rows
    report.results['a5_types'] = sorted(flags)
    report.frames['s5chain'] = pd.DataFrame(rows, columns=['check', 'value', 'expected'])


def _example_asai(report: Report) -> None:
    rows = []
    for base in ['sl23', 'd8']:
        group, tau = catalog.wreath_input(base)
        remark = asai_remark(tau, group, seed=report.seed)
        rows.append(remark.to_json())
        report.check(f"asai remark {base}", remark.holds and remark.irreducible)
    report.check('nondihedral input gives irreducible wedge2', not rows[0]['wedge2_reducible'] and not rows[0]['tau_dihedral'])
    report.check('dihedral input gives reducible wedge2', rows[1]['wedge2_reducible'] and rows[1]['has_selftwist'])
    report.results['asai'] = rows
    report.frames['asai'] = pd.DataFrame(rows)


def _example_intersections(report: Report) -> None:
    rows = []
    for name in INTERSECTION_ENTRIES:
        flags = classify_gl4_analogue(catalog.representation(name), seed=report.seed)
        rows.append({'name': name, 'types': ' '.join(sorted(flags))})
        report.check(f"several types: {name}", len(flags) >= 2 and INDUCED_TYPE in flags)
    identity_rows = []
    for name, kind, inputs in [('S63sym', PlaceKind.SPLIT, [2, 5]), ('S63sym', PlaceKind.INERT, [3]),
                               ('S63wedge', PlaceKind.SPLIT, [2, 5]), ('S63wedge', PlaceKind.INERT, [3])]:
        result = verify_identity(name, inputs, kind)
        identity_rows.append({'identity': name, 'kind': kind.value, 'holds': result.holds, 'lhs': str(result.lhs)})
        report.check(f"{name} {kind.value}", result.holds)
    report.results['types'] = rows
    report.results['identities'] = identity_rows
    report.frames['types'] = pd.DataFrame(rows, columns=['name', 'types'])
    report.frames['identities'] = pd.DataFrame(identity_rows, columns=['identity', 'kind', 'holds', 'lhs'])


def run_example(args, report: Report) -> None:
    {'g192': _example_g192, 's5chain': _example_s5chain, 'asai': _example_asai,
     'intersections': _example_intersections}[args.name](report)


def run_satake(args, report: Report) -> None:
    if args.trials < 1:
        raise InputError("--trials must be positive")
    names = list(IDENTITIES) if args.identity == 'all' else [args.identity]
    rows = []
    for name in names:
        result = fuzz(name, trials=args.trials, seed=report.seed)
        report.results[name] = result.to_json()
        report.check(f"identity {name}", result.passed)
        rows.append({'identity': name, 'trials': result.trials, 'failures': len(result.failures),
                     'convention_dependent': ','.join(result.convention_dependent)})
    report.frames['identities'] = pd.DataFrame(rows, columns=['identity', 'trials', 'failures', 'convention_dependent'])


def run_weyl(args, report: Report) -> None:
    ns = list(range(1, MAX_LEVI_N + 1)) if args.all else [args.n]
    for n in ns:
        act = w0_for_levi(n)
        report.results[str(n)] = act.to_json()
        report.check(f"parity n={n}", act.a3_flipped == (act.r % 2 == 0))
        report.check(f"a_(r-2) fixed n={n}", act.alpha_r_minus_2_fixed)
        report.check(f"length n={n}", act.length_w0 == act.length_wG - act.length_wM)
    report.frames['weyl'] = weyl_frame(ns)


def run_catalog(args, report: Report) -> None:
    frame = catalog.catalog_frame()
    report.results['entries'] = frame.to_dict(orient='records')
    report.frames['catalog'] = frame
    report.frames['identities'] = list_identities()


COMMANDS = {
    'analyze': run_analyze, 'kable': run_kable, 'example': run_example, 'satake': run_satake,
    'weyl': run_weyl, 'catalog': run_catalog,
}
OUTPUT_ONLY = {'format', 'excel', 'verbose', 'quiet', 'command'}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the cusplab command.

    Returns:
    int: 0 when every check passes, 1 when a mathematical check fails, 2 on usage or input errors.
    """
    load_dotenv()
    args = build_parser().parse_args(argv)
    _set_verbosity(args)
    seed = args.seed if args.seed is not None else config.default_seed()
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in OUTPUT_ONLY}
    inputs['seed'] = seed
    report = Report(command=args.command, inputs=inputs, seed=seed)
    try:
        COMMANDS[args.command](args, report)
    except InputError as e:
        logging.error(f"{args.command}: {e}")
        return 2
    except CheckFailure as e:
        logging.error(f"{args.command}: check failed: {e}")
        report.failures.append(str(e))
    except CuspLabError as e:
        # remaining library errors exit 1
        logging.error(f"{args.command}: {type(e).__name__}: {e}")
        report.failures.append(f"{type(e).__name__}: {e}")
    print(render_json(report) if args.format == 'json' else render_text(report))
    if args.excel:
        export_excel(report, args.excel)
    if not report.passed:
        logging.error(f"{args.command}: failed checks: {', '.join(report.failures)}")
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
