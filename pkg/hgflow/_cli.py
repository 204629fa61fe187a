"""
Command line interface: evaluation of F_{L,N} and the numerical verification suites.

Every subcommand builds a :py:class:`Report` and prints it as text, csv or json on standard
output. Logging goes to standard error. The exit code is 0 when every check passed, 1 when one
failed and 2 on bad input.
"""
import argparse
import io
import json
import logging
import sys

import numpy as np
from pyrsistent import PClass, PMap, field, freeze, optional, pmap, pvector_field, thaw
from pyrsistent import InvariantException

from hgflow._contiguity import check_contiguity
from hgflow._errors import DomainError, HGFlowError, ResonantShift, VanishingDenominator
from hgflow._hamiltonian import flow, hamiltonian_gradient, hamiltonian_value, phase_point
from hgflow._hgsolution import build_hg_solution, hamiltonian_residual
from hgflow._lax import (bc_to_qp, build_A_from_bc, build_B, build_reduced, pfaffian_to_reduced, qp_to_bc,
                         reduced_B, reduced_rhs, riemann_scheme_residual, spectral_type, trace_identity_residual,
                         zero_curvature_residual)
from hgflow._parallel import ordered_map, thread_count
from hgflow._params import (HGParams, SystemParams, hg_params, load_params, map_system_to_hg, random_params,
                            system_params)
from hgflow._pfaffian import (build_connection, evaluate_solution, holomorphic_solution, holomorphic_solution_at,
                              integrability_residual, locus_distance, omega_at, sample_path, scalar_derivative,
                              solution_vector)
from hgflow._quadrature import QuadratureSpec, eval_integral
from hgflow._serialization import (array_to_json, complex_to_json, json_number, load_path, parse_complex,
                                   write_samples_csv)
from hgflow._series import apply_partial, eval_series, hg_pde_residual, pde_residual_scale, series_coefficients, \
    write_series_csv

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ('text', 'csv', 'json')

DEFAULT_TOLERANCES = {
    'eval': 1e-8,
    'pde-check': 1e-12,
    'pfaffian-check': 1e-9,
    'continue': 1e-8,
    'hamiltonian-check': 1e-6,
    'lax-check': 1e-10,
    'verify-theorem': 1e-8,
    'contiguity-check': 1e-12,
}

# Checks whose threshold differs from the command default; --tol overrides both.
CHECK_TOLERANCES = freeze({
    'pfaffian-check': {'scalar-vs-matrix': 1e-13, 'integrability': 1e-12, 'holomorphic-solution': 1e-9},
    'hamiltonian-check': {'gradient-vs-fd': 1e-6, 'path-independence': 1e-7, 'round-trip': 1e-7},
    'lax-check': {'trace-identities': 1e-12},
})

DEFAULT_DEGREES = {
    'eval': 80,
    'pde-check': 20,
    'pfaffian-check': 60,
    'continue': 80,
    'hamiltonian-check': 1,
    'lax-check': 80,
    'verify-theorem': 80,
    'contiguity-check': 20,
}

NEGATIVE_CONTROL_FLOOR = 1e-3


class RunConfig(PClass):
    command = field(type=str, mandatory=True)
    params_path = field(type=optional(str), initial=None)
    M = field(type=int, mandatory=True, invariant=lambda M: (M >= 1, 'degree must be at least 1'))
    tol = field(type=optional(float), initial=None, factory=lambda t: t if t is None else float(t),
                invariant=lambda t: (t is None or t > 0, 'tolerance must be positive'))
    output_format = field(type=str, initial='text',
                          invariant=lambda f: (f in OUTPUT_FORMATS, 'format must be text, csv or json'))
    seed = field(type=int, initial=0)
    threads = field(type=int, initial=1)

    def tolerance(self, name):
        """
        Pass threshold of the named check: the --tol value when given, otherwise the check's own
        default, falling back to the command default.
        """
        if self.tol is not None:
            return self.tol

        return CHECK_TOLERANCES.get(self.command, pmap()).get(name, DEFAULT_TOLERANCES[self.command])


def run_config(args):
    return RunConfig(command=args.command,
                     params_path=args.params,
                     M=args.degree if args.degree is not None else DEFAULT_DEGREES[args.command],
                     tol=args.tol,
                     output_format=args.format,
                     seed=args.seed,
                     threads=thread_count())


class Check(PClass):
    name = field(type=str, mandatory=True)
    value = field(type=float, mandatory=True, factory=float)
    passed = field(type=optional(bool), initial=None)
    tolerance = field(type=optional(float), initial=None)


class Report(PClass):
    command = field(type=str, mandatory=True)
    passed = field(type=optional(bool), initial=None)
    tolerance = field(type=optional(float), initial=None)
    checks = pvector_field(Check)
    values = field(type=PMap, initial=pmap(), factory=freeze)

    def to_json(self):
        return {
            'command': self.command,
            'passed': self.passed,
            'tolerance': self.tolerance,
            'checks': [{'name': c.name, 'value': json_number(c.value), 'passed': c.passed, 'tolerance': c.tolerance}
                       for c in self.checks],
            'values': thaw(self.values),
        }


def check(name, value, config):
    tol = config.tolerance(name)
    return Check(name=name, value=value, passed=bool(value <= tol), tolerance=tol)


def report(config, checks, values=None):
    """
    Assemble a :py:class:`Report`: passed is None without decisive checks, otherwise the
    conjunction of every decided check. The report tolerance is the loosest check threshold.
    """
    decided = [c.passed for c in checks if c.passed is not None]
    thresholds = [c.tolerance for c in checks if c.tolerance is not None]
    return Report(command=config.command,
                  passed=all(decided) if decided else None,
                  tolerance=max(thresholds) if thresholds else None,
                  checks=checks,
                  values=values or {})


def _status(passed):
    return {True: 'PASS', False: 'FAIL', None: 'SKIP'}[passed]


def render(rep, output_format):
    if output_format == 'json':
        return json.dumps(rep.to_json(), sort_keys=True, indent=2) + '\n'

    if output_format == 'csv':
        out = io.StringIO()
        out.write('name,value,status\n')
        for c in rep.checks:
            out.write('{0},{1!r},{2}\n'.format(c.name, c.value, _status(c.passed)))
        return out.getvalue()

    lines = ['{0}: {1}'.format(key, json.dumps(value, sort_keys=True))
             for key, value in sorted(thaw(rep.values).items())]
    lines += ['{0}: {1:.3e} {2}'.format(c.name, c.value, _status(c.passed)) for c in rep.checks]
    if rep.passed is not None:
        lines.append(_status(rep.passed))
    return '\n'.join(lines) + '\n'


def _given_together(args, names):
    given = [getattr(args, name) is not None for name in names]
    if any(given) and not all(given):
        raise ValueError('--{0} must be given together'.format(', --'.join(names)))

    return all(given)


def resolve_params(args, kind, reducible=False):
    """
    Parameters from exactly one source: a JSON file, inline flags, or a random draw from the seed.
    kind 'hg' maps system parameters to (alpha, beta, gamma); kind 'system' requires system parameters.
    """
    hg_inline = _given_together(args, ('alpha', 'beta', 'gamma'))
    system_inline = _given_together(args, ('e', 'kappa', 'theta'))
    if (args.params is not None) + hg_inline + system_inline > 1:
        raise ValueError('Parameters must come from exactly one source')

    if args.params is not None:
        params = load_params(args.params)
    elif hg_inline:
        params = hg_params(args.L, args.N, args.alpha, args.beta, args.gamma)
    elif system_inline:
        params = system_params(args.L, args.N, args.e, args.kappa, args.theta)
    else:
        params = random_params(args.seed, args.L, args.N, reducible)

    if kind == 'hg' and isinstance(params, SystemParams):
        return map_system_to_hg(params)

    if kind == 'system' and isinstance(params, HGParams):
        raise ValueError('{0} needs e, kappa and theta'.format(args.command))

    return params


def _point(values, N, default=None):
    if values is None:
        if default is None:
            raise ValueError('--x is required')
        values = default

    x = np.array(values, dtype=complex)
    if x.shape != (N,):
        raise ValueError('Expected {0} coordinates in --x, got {1}'.format(N, len(x)))

    return x


def _random_points(rng, N, count, margin=0.05):
    points = []
    while len(points) < count:
        x = rng.uniform(0.1, 0.9, N) + 1j * rng.uniform(-0.4, 0.4, N)
        if locus_distance(x) >= margin:
            points.append(x)

    return points


def _complex_normal(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _eval(args, config):
    hp = resolve_params(args, 'hg')
    x = _point(args.x, hp.N)
    values = {}
    checks = []
    if args.method in ('series', 'both'):
        ts = series_coefficients(hp, config.M)
        value, tail = eval_series(ts, x)
        values['series'] = complex_to_json(value)
        values['tail_bound'] = json_number(tail)
        if args.dump_series:
            with open(args.dump_series, 'w') as f:
                write_series_csv(ts, f)

    if args.method in ('integral', 'both'):
        integral = eval_integral(hp, x, QuadratureSpec(nodes=args.nodes, form=args.form))
        values['integral'] = complex_to_json(integral)
        if args.method == 'both':
            checks.append(check('series-vs-integral', abs(integral - value), config))

    return report(config, checks, values), None


def _pde_check(args, config):
    hp = resolve_params(args, 'hg')
    M = config.M
    checks = [check('pde[{0}]'.format(i), hg_pde_residual(hp, M, i).max_abs(M - 1) / pde_residual_scale(hp, M, i),
                    config)
              for i in range(1, hp.N + 1)]
    return report(config, checks), None


def _pfaffian_check(args, config):
    hp = resolve_params(args, 'hg')
    pc = build_connection(hp)
    rng = np.random.default_rng(config.seed)
    points = _random_points(rng, hp.N, args.points)
    K = pc.size

    agreement = 0.0
    for x in points:
        y = solution_vector(hp.L, hp.N, _complex_normal(rng, K))
        for omega, derivative in zip(omega_at(pc, x), scalar_derivative(hp, x, y)):
            matrix_side = omega.dot(y.as_array())
            scale = max(float(np.max(np.sum(np.abs(omega), axis=1)) * np.max(np.abs(y.as_array()))), 1e-300)
            agreement = max(agreement, float(np.max(np.abs(matrix_side - derivative.as_array()))) / scale)

    integrability = max(ordered_map(lambda x: integrability_residual(pc, x, relative=True), points))

    x = 0.05 * np.arange(1, hp.N + 1) / hp.N
    components = holomorphic_solution(hp, config.M)
    y = evaluate_solution(components, x)
    holomorphic = 0.0
    for i, derivative in enumerate(scalar_derivative(hp, x, y), start=1):
        termwise = evaluate_solution([apply_partial(ts, i) for ts in components], x)
        holomorphic = max(holomorphic, float(np.max(np.abs(termwise.as_array() - derivative.as_array()))))

    checks = [check('scalar-vs-matrix', agreement, config),
              check('integrability', integrability, config),
              check('holomorphic-solution', holomorphic, config)]
    return report(config, checks), None


def _continue(args, config):
    hp = resolve_params(args, 'hg')
    path = load_path(args.path)
    start = np.array(path.waypoints[0], dtype=complex)
    if start.shape != (hp.N,):
        raise ValueError('Waypoints must have {0} coordinates'.format(hp.N))

    if np.max(np.abs(start)) >= 1:
        raise DomainError('The path must start inside the unit polydisc')

    pc = build_connection(hp)
    y0 = holomorphic_solution_at(hp, start, config.M)
    rows = sample_path(pc, path, y0, args.integration_tol, args.samples)
    s, end, y = rows[-1]
    values = {'x': array_to_json(end), 'y': array_to_json(y.as_array())}

    checks = []
    if all(np.max(np.abs(np.array(w, dtype=complex))) < 1 for w in path.waypoints):
        expected = holomorphic_solution_at(hp, end, config.M)
        checks.append(check('series-agreement', float(np.max(np.abs(expected.as_array() - y.as_array()))),
                            config))

    table = None
    if config.output_format == 'csv':
        out = io.StringIO()
        write_samples_csv(rows, out)
        table = out.getvalue()

    return report(config, checks, values), table


def _finite_difference_gradient(i, x, pt, sp, h=1e-6):
    vector = pt.as_vector()
    L, N = pt.L, pt.N
    half = (L - 1) * N
    gradient = np.zeros(len(vector), dtype=complex)
    for k in range(len(vector)):
        step = np.zeros(len(vector))
        step[k] = h
        plus = hamiltonian_value(i, x, phase_point(*_split(vector + step, L, N, half)), sp)
        minus = hamiltonian_value(i, x, phase_point(*_split(vector - step, L, N, half)), sp)
        gradient[k] = (plus - minus) / (2 * h)

    return gradient


def _split(vector, L, N, half):
    return vector[:half].reshape(L - 1, N), vector[half:].reshape(L - 1, N)


def _staircase(x_from, x_to, pt, sp, tol, order):
    x = np.array(x_from, dtype=complex)
    for k in order:
        target = np.array(x)
        target[k] = x_to[k]
        pt = flow(x, target, pt, sp, tol)
        x = target

    return pt


def _hamiltonian_check(args, config):
    sp = resolve_params(args, 'system')
    rng = np.random.default_rng(config.seed)
    L, N = sp.L, sp.N

    gradient = 0.0
    for x in _random_points(rng, N, args.points):
        pt = phase_point(rng.uniform(-0.5, 0.5, (L - 1, N)) + 1j * rng.uniform(-0.5, 0.5, (L - 1, N)),
                         rng.uniform(-0.5, 0.5, (L - 1, N)) + 1j * rng.uniform(-0.5, 0.5, (L - 1, N)))
        i = int(rng.integers(1, N + 1))
        grad_q, grad_p = hamiltonian_gradient(i, x, pt, sp)
        automatic = np.concatenate([grad_q.ravel(), grad_p.ravel()])
        numeric = _finite_difference_gradient(i, x, pt, sp)
        scale = max(1.0, float(np.max(np.abs(automatic))))
        gradient = max(gradient, float(np.max(np.abs(automatic - numeric))) / scale)

    start = 0.2 + 0.15 * np.arange(N) + 0j
    end = start + 0.04 + 0.03j
    pt = phase_point(rng.uniform(-0.1, 0.1, (L - 1, N)), rng.uniform(-0.1, 0.1, (L - 1, N)))
    tol = args.integration_tol
    if N > 1:
        first = _staircase(start, end, pt, sp, tol, range(N))
        second = _staircase(start, end, pt, sp, tol, reversed(range(N)))
    else:
        first = flow(start, end, pt, sp, tol)
        detour = (start + end) / 2 + 0.05j
        second = flow(detour, end, flow(start, detour, pt, sp, tol), sp, tol)
    back = flow(end, start, first, sp, tol)

    checks = [check('gradient-vs-fd', gradient, config),
              check('path-independence', float(np.max(np.abs(first.as_vector() - second.as_vector()))), config),
              check('round-trip', float(np.max(np.abs(back.as_vector() - pt.as_vector()))), config)]
    return report(config, checks), None


def _default_point(N):
    return [0.3 / k for k in range(1, N + 1)]


def _lax_check(args, config):
    sp = resolve_params(args, 'system', reducible=True)
    rng = np.random.default_rng(config.seed)
    L, N = sp.L, sp.N

    x = _random_points(rng, N, 1)[0]
    pt = phase_point(_complex_normal(rng, (L - 1, N)) * 0.5, _complex_normal(rng, (L - 1, N)) * 0.5)
    gauge = 1 + 0.5 * _complex_normal(rng, L - 1)
    bc = qp_to_bc(pt, sp, gauge, x)
    fd = build_A_from_bc(bc, sp)
    back, _, _ = bc_to_qp(bc)
    round_trip = float(max(np.max(np.abs(back.q - pt.q)), np.max(np.abs(back.p - pt.p))))

    x = _point(args.x, N, _default_point(N))
    y = holomorphic_solution_at(map_system_to_hg(sp), x, config.M)
    rs = pfaffian_to_reduced(x, y, sp)
    lax = build_reduced(rs, sp)
    df, db = reduced_rhs(rs, sp)
    perturbed = (df, db + 1.0)

    curvature = 0.0
    control = float('inf')
    closed_form = 0.0
    for _ in range(args.points):
        z = rng.uniform(-3, 3) + 1j * rng.uniform(0.5, 3)
        for i in range(1, N + 1):
            curvature = max(curvature, zero_curvature_residual(i, rs, sp, z))
            control = min(control, zero_curvature_residual(i, rs, sp, z, perturbed))
            difference = reduced_B(i, rs, sp, z) - build_B(i, lax.fd, sp, z)
            closed_form = max(closed_form, float(np.max(np.abs(difference))))

    checks = [check('trace-identities', trace_identity_residual(bc, sp), config),
              check('riemann-scheme', riemann_scheme_residual(fd, sp), config),
              check('bc-round-trip', round_trip, config),
              check('reduced-riemann-scheme', riemann_scheme_residual(lax.fd, sp), config),
              check('reduced-B', closed_form, config),
              check('zero-curvature', curvature, config),
              Check(name='negative-control', value=control, passed=bool(control > NEGATIVE_CONTROL_FLOOR))]
    values = {'spectral_type': [list(t) for t in spectral_type(fd)]}
    return report(config, checks, values), None


def _verify_theorem(args, config):
    sp = resolve_params(args, 'system', reducible=True)
    x = _point(args.x, sp.N, _default_point(sp.N))
    state = build_hg_solution(sp, x, config.M)
    residual = hamiltonian_residual(state)
    checks = [check('q-residual', residual.q_residual, config),
              check('p-residual', residual.p_residual, config)]
    return report(config, checks, {'p': array_to_json(state.pt.p), 'y0': complex_to_json(state.y.y0)}), None


def _contiguity_tasks(args, hp):
    L, N = hp.L, hp.N
    if args.all:
        tasks = []
        for relation in range(1, 8):
            if relation in (1, 3, 4, 5):
                tasks += [(relation, n) for n in range(1, L)]
            elif relation == 6:
                tasks += [(relation, (i, j)) for i in range(1, N + 1) for j in range(1, N + 1) if i != j]
            else:
                tasks += [(relation, i) for i in range(1, N + 1)]
        return tasks

    if args.relation is None or args.index is None:
        raise ValueError('contiguity-check needs --all or both --relation and --index')

    if args.relation == 6:
        if len(args.index) != 2:
            raise ValueError('Relation 6 needs two indices')
        return [(6, tuple(args.index))]

    return [(args.relation, args.index[0])]


def _contiguity_check(args, config):
    hp = resolve_params(args, 'hg')

    def run_task(task):
        relation, index = task
        label = index if isinstance(index, int) else ','.join(str(k) for k in index)
        name = 'cont{0}[{1}]'.format(relation, label)
        try:
            return check(name, check_contiguity(relation, hp, index, config.M, relative=True), config)
        except (VanishingDenominator, ResonantShift) as e:
            logger.debug('Skipping %s: %s', name, e)
            return Check(name=name, value=float('nan'), passed=None)

    return report(config, ordered_map(run_task, _contiguity_tasks(args, hp))), None


COMMANDS = {
    'eval': _eval,
    'pde-check': _pde_check,
    'pfaffian-check': _pfaffian_check,
    'continue': _continue,
    'hamiltonian-check': _hamiltonian_check,
    'lax-check': _lax_check,
    'verify-theorem': _verify_theorem,
    'contiguity-check': _contiguity_check,
}


def _common_arguments():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--L', type=int, default=2, help='number of upper parameters plus one')
    parser.add_argument('--N', type=int, default=1, help='number of variables')
    parser.add_argument('--params', metavar='FILE', help='JSON parameter file')
    complex_help = 'complex values written as re or re+imj'
    for name in ('alpha', 'beta', 'gamma', 'e', 'kappa', 'theta'):
        parser.add_argument('--' + name, nargs='+', type=parse_complex, help=complex_help)
    parser.add_argument('--seed', type=int, default=0, help='seed for random parameters and sample points')
    parser.add_argument('--degree', type=int, help='truncation degree M')
    parser.add_argument('--tol', type=float, help='pass threshold')
    parser.add_argument('--format', choices=OUTPUT_FORMATS, default='text')
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging on standard error')
    return parser


def build_parser():
    common = _common_arguments()
    parser = argparse.ArgumentParser(prog='hgflow', description=__doc__.strip().splitlines()[0])
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    ev = commands.add_parser('eval', parents=[common], help='value of F_{L,N} at x')
    ev.add_argument('--x', nargs='+', type=parse_complex, required=True)
    ev.add_argument('--method', choices=('series', 'integral', 'both'), default='series')
    ev.add_argument('--nodes', type=int, default=48, help='quadrature nodes per axis')
    ev.add_argument('--form', choices=('cube', 'simplex'), default='cube')
    ev.add_argument('--dump-series', metavar='PATH', help='write the coefficients as CSV')

    commands.add_parser('pde-check', parents=[common], help='annihilation by the hypergeometric operators')

    pf = commands.add_parser('pfaffian-check', parents=[common], help='Pfaffian system consistency')
    pf.add_argument('--points', type=int, default=100)

    co = commands.add_parser('continue', parents=[common], help='analytic continuation along a path')
    co.add_argument('--path', metavar='FILE', required=True, help='JSON file {"waypoints": [...]}')
    co.add_argument('--samples', type=int, default=10, help='samples per segment')
    co.add_argument('--integration-tol', type=float, default=1e-10)

    ha = commands.add_parser('hamiltonian-check', parents=[common], help='gradients and flow compatibility')
    ha.add_argument('--points', type=int, default=50)
    ha.add_argument('--integration-tol', type=float, default=1e-11)

    la = commands.add_parser('lax-check', parents=[common], help='Fuchsian system and zero curvature')
    la.add_argument('--points', type=int, default=20)
    la.add_argument('--x', nargs='+', type=parse_complex)

    ve = commands.add_parser('verify-theorem', parents=[common], help='hypergeometric particular solution')
    ve.add_argument('--x', nargs='+', type=parse_complex)

    ct = commands.add_parser('contiguity-check', parents=[common], help='contiguity relations')
    ct.add_argument('--relation', type=int, choices=range(1, 8))
    ct.add_argument('--index', type=int, nargs='+')
    ct.add_argument('--all', action='store_true')
    return parser


def _configure_logging(verbose):
    level = logging.DEBUG if verbose else logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level, format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger('hgflow').setLevel(level)


def run(argv=None):
    """
    Run the command line and return the exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    _configure_logging(args.verbose)
    try:
        config = run_config(args)
        rep, table = COMMANDS[args.command](args, config)
    except (HGFlowError, InvariantException, TypeError, ValueError, KeyError, OSError, ZeroDivisionError) as e:
        sys.stderr.write('hgflow: {0}: {1}\n'.format(type(e).__name__, e))
        return 2

    sys.stdout.write(table if table is not None else render(rep, config.output_format))
    return 1 if rep.passed is False else 0


def main():
    sys.exit(run(sys.argv[1:]))
