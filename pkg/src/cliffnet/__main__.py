import os
import sys
import json
import logging
import argparse
import numpy as np
from . import __version__ as version
from .errors import ClfFormatError, NumericalError
from .util import THREADS_ENV, resolve_threads
from .manifest import RunManifest, manifest_path
from .renderers import create_renderer, read_records
from .datagen import get_generator, write_clf, read_clf
from .models import SurrogateConfig, FAMILIES
from .models.metrics import METRIC_NAMES, evaluate
from .models.checkpoint import load_checkpoint
from .models.train import train, check_dataset, split_trajectories
from .checks import SUITES, run_checks, failures
from .bench import BENCH_OPS, bench

log = logging.getLogger('cliffnet')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DIVERGED = 4

_DTYPES = {'f32': np.float32, 'f64': np.float64}


def _output(text, path=None):
    if path:
        with open(path, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith('\n'):
            sys.stdout.write('\n')


def _write_manifest(manifest, output):
    manifest.add_output(output)
    path = manifest.write(manifest_path(output))
    log.info('wrote %s', path)


def _gen(args):
    params = {
        'grid': args.grid,
        'trajectories': args.traj,
        'steps': args.steps,
        'seed': args.seed,
        'dtype': _DTYPES[args.dtype],
        'threads': args.threads,
    }
    if args.dt is not None:
        params['dt'] = args.dt
    if args.pde == 'advection2d':
        params['velocity'] = args.velocity
    elif args.substeps is not None:
        params['substeps'] = args.substeps
    dataset = get_generator(args.pde)(**params)

    write_clf(args.out, dataset)
    config = dict(dataset.provenance, pde=args.pde, dtype=args.dtype)
    manifest = RunManifest('gen', config, args.seed, args.threads)
    _write_manifest(manifest, args.out)
    return EXIT_OK


def _load_config(args, dataset):
    data = {}
    if args.config:
        with open(args.config) as f:
            data = json.load(f)
    overrides = {
        'family': args.family,
        'blocks': args.blocks,
        'channels': args.channels,
        'modes': args.modes,
        'history': args.history,
        'kernel_size': args.kernel_size,
        'norm': args.norm,
        'faithful': args.faithful,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})

    family = data.pop('family', 'cfno')
    signature = data.pop('signature', dataset.signature)
    desk = SurrogateConfig.desk(family, signature, ndim=len(dataset.spatial_shape))
    config = desk.to_dict()
    config.update(data)
    if 'seed' not in data:
        config['seed'] = args.seed
    config['data_channels'] = dataset.channels
    if config.get('blades') is None:
        config['blades'] = dataset.packing.mapped_blades(dataset.signature)
    return SurrogateConfig.from_dict(config)


def _train(args):
    dataset = read_clf(args.data)
    os.makedirs(args.out, exist_ok=True)
    if args.resume:
        config = load_checkpoint(args.resume).config
    else:
        config = _load_config(args, dataset)
    check_dataset(config, dataset)

    manifest = RunManifest('train', config.to_dict(), args.seed, args.threads)
    manifest.config.update(epochs=args.epochs, lr=args.lr, batch_size=args.batch_size)
    manifest.add_input(args.data)
    if args.resume:
        manifest.add_input(args.resume)

    ckpt_dir = os.path.join(args.out, 'checkpoint')
    result = train(
        config, dataset,
        epochs=args.epochs,
        lr=args.lr,
        batch_size=args.batch_size,
        seed=args.seed,
        valid_fraction=args.valid_fraction,
        out_dir=ckpt_dir,
        resume=args.resume,
    )

    curve_path = os.path.join(args.out, 'curve.csv')
    rows = [{'type': 'curve', 'step': s, 'train_smse': t, 'valid_smse': v}
            for s, t, v in result.curve]
    _output(create_renderer('csv')(rows), curve_path)

    _, valid = split_trajectories(dataset.trajectories, args.valid_fraction, args.seed)
    metrics = evaluate(result.model, dataset, ('onestep', 'rollout'),
                       batch_size=args.batch_size, trajectories=valid or None)
    records = [{'type': 'metric', 'name': k, 'value': v} for k, v in metrics.items()]
    _output(create_renderer('text')(records))

    manifest.add_output(ckpt_dir)
    manifest.add_output(curve_path)
    manifest.write(manifest_path(args.out))
    return EXIT_OK


def _parse_metrics(value):
    names = [n.strip() for n in value.split(',') if n.strip()]
    unknown = [n for n in names if n not in METRIC_NAMES]
    if unknown or not names:
        raise ValueError('unknown metrics: {}; choose from {}'.format(
            ', '.join(unknown) or '(none)', ', '.join(METRIC_NAMES)))
    return tuple(names)


def _eval(args):
    metrics = _parse_metrics(args.metrics)
    ckpt = load_checkpoint(args.ckpt)
    dataset = read_clf(args.data)
    check_dataset(ckpt.config, dataset)

    result = evaluate(ckpt.model, dataset, metrics, steps=args.steps, batch_size=args.batch_size)
    records = [{'type': 'metric', 'name': k, 'value': v} for k, v in result.items()]
    _output(create_renderer('json')(records), args.out)
    if args.out:
        manifest = RunManifest('eval', {'metrics': list(metrics), 'steps': args.steps}, None, args.threads)
        manifest.add_input(args.ckpt)
        manifest.add_input(args.data)
        _write_manifest(manifest, args.out)
    return EXIT_OK


def _check(args):
    records = run_checks(args.suite, seed=args.seed, scale=args.scale)
    _output(create_renderer('text')(records))
    if args.csv:
        _output(create_renderer('csv')(records), args.csv)
        config = {'suites': list(args.suite), 'scale': args.scale}
        _write_manifest(RunManifest('check', config, args.seed, args.threads), args.csv)
    failed = failures(records)
    if failed:
        log.warning('%d of %d properties failed', len(failed), len(records))
        return EXIT_FAILED
    return EXIT_OK


def _bench(args):
    if args.op not in BENCH_OPS:
        raise ValueError('unknown bench op: {!r}; choose from {}'.format(
            args.op, ', '.join(BENCH_OPS)))
    records = bench(args.op, args.size, args.reps, args.seed)
    _output(create_renderer('csv')(records), args.out)
    if args.out:
        config = {'op': args.op, 'sizes': list(args.size), 'reps': args.reps}
        _write_manifest(RunManifest('bench', config, args.seed, args.threads), args.out)
    return EXIT_OK


def _plot(args):
    with open(args.input) as f:
        records = read_records(f.read())
    _output(create_renderer('svg', title=args.title)(records), args.out)
    manifest = RunManifest('plot', {'title': args.title}, None, args.threads)
    manifest.add_input(args.input)
    _write_manifest(manifest, args.out)
    return EXIT_OK


CMD_HELP = '''Clifford-algebra neural layers, toy PDE data and surrogates.

Here are some use cases of the command line tool:

    $ python -m cliffnet gen --pde advection2d --grid 32 --traj 16 --out adv.clf
    $ python -m cliffnet train --data adv.clf --family cfno --epochs 30 --out run
    $ python -m cliffnet eval --ckpt run/checkpoint --data adv.clf
    $ python -m cliffnet check --suite all --csv checks.csv
    $ python -m cliffnet bench --op gp2d --size 32 --size 64 --out bench.csv
    $ python -m cliffnet plot --in run/curve.csv --out curve.svg

Exit codes: 0 ok, 1 property failure, 2 usage, 3 I/O, 4 divergence.
'''


def _add_gen(subparsers):
    p = subparsers.add_parser('gen', help='generate a CLF1 trajectory file')
    p.add_argument('--pde', required=True, choices=['advection2d', 'maxwell3d'])
    p.add_argument('--grid', type=int, default=32, help='cells per spatial axis')
    p.add_argument('--traj', type=int, default=16, help='number of trajectories')
    p.add_argument('--steps', type=int, default=10, help='stored frames per trajectory')
    p.add_argument('--dt', type=float, help='time step between stored frames')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--velocity', default='constant', help='advection velocity law')
    p.add_argument('--substeps', type=int, help='solver steps per stored Maxwell frame')
    p.add_argument('--dtype', default='f32', choices=sorted(_DTYPES))
    p.add_argument('-o', '--out', required=True, help='output CLF1 path')
    p.set_defaults(func=_gen)


def _add_train(subparsers):
    p = subparsers.add_parser('train', help='train a surrogate model')
    p.add_argument('--data', required=True, help='CLF1 dataset')
    p.add_argument('--config', help='JSON model config; inline flags override it')
    p.add_argument('--family', choices=FAMILIES)
    p.add_argument('--blocks', type=int)
    p.add_argument('--channels', type=int)
    p.add_argument('--modes', type=int)
    p.add_argument('--history', type=int)
    p.add_argument('--kernel-size', type=int)
    p.add_argument('--norm', action=argparse.BooleanOptionalAction, default=None)
    p.add_argument('--faithful', action='store_true', default=None,
                   help='rotational layers with the plain rotor form')
    p.add_argument('--epochs', type=int, default=30)
    p.add_argument('--lr', type=float, default=1e-3)
    p.add_argument('--batch-size', type=int, default=8)
    p.add_argument('--valid-fraction', type=float, default=0.1)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--resume', metavar='CKPT', help='checkpoint directory to continue from')
    p.add_argument('-o', '--out', required=True, help='output directory')
    p.set_defaults(func=_train)


def _add_eval(subparsers):
    p = subparsers.add_parser('eval', help='evaluate a checkpoint, JSON to stdout')
    p.add_argument('--ckpt', required=True, help='checkpoint directory')
    p.add_argument('--data', required=True, help='CLF1 dataset')
    p.add_argument('--metrics', default='onestep,scalar,vector,rollout',
                   help='comma separated, from: ' + ', '.join(METRIC_NAMES))
    p.add_argument('--steps', type=int, default=5, help='rollout length')
    p.add_argument('--batch-size', type=int, default=16)
    p.add_argument('-o', '--out', help='write the JSON into a file')
    p.set_defaults(func=_eval)


def _add_check(subparsers):
    p = subparsers.add_parser('check', help='run the property suites')
    p.add_argument('--suite', action='append', choices=SUITES + ('all',),
                   help='suite to run, repeatable (default: all)')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--scale', type=float, default=1.0, help='scale the number of random cases')
    p.add_argument('--csv', help='write per-property max errors as CSV')
    p.set_defaults(func=_check)


def _add_bench(subparsers):
    p = subparsers.add_parser('bench', help='time a kernel, CSV output')
    p.add_argument('--op', required=True, help='one of: ' + ', '.join(BENCH_OPS))
    p.add_argument('--size', type=int, action='append', help='grid size, repeatable')
    p.add_argument('--reps', type=int, default=10)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('-o', '--out', help='write the CSV into a file')
    p.set_defaults(func=_bench)


def _add_plot(subparsers):
    p = subparsers.add_parser('plot', help='render a CSV as SVG')
    p.add_argument('--in', dest='input', required=True, help='CSV from train, check or bench')
    p.add_argument('-o', '--out', required=True, help='output SVG path')
    p.add_argument('--title')
    p.set_defaults(func=_plot)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='python -m cliffnet',
        description=CMD_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for progress, -vv for debug output')
    parser.add_argument('--threads', type=int,
                        help='worker threads (default: ${} or 1)'.format(THREADS_ENV))
    parser.add_argument('--version', action='version', version='cliffnet ' + version)
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True
    for add in (_add_gen, _add_train, _add_eval, _add_check, _add_bench, _add_plot):
        add(subparsers)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')

    try:
        args.threads = resolve_threads(args.threads)
        if getattr(args, 'suite', False) is None:
            args.suite = ['all']
        if getattr(args, 'size', False) is None:
            args.size = [16, 32]
        return args.func(args)
    except NumericalError as e:
        log.error('%s', e)
        return EXIT_DIVERGED
    except (ClfFormatError, OSError) as e:
        log.error('%s', e)
        return EXIT_IO
    except ValueError as e:
        log.error('%s', e)
        return EXIT_USAGE


def cli():
    sys.exit(main())


if __name__ == '__main__':
    cli()
