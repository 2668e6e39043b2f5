import io
import os
import json
import tempfile
import contextlib
import numpy as np
from unittest import TestCase, mock
from cliffnet import algebra
from cliffnet.__main__ import main, EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO, EXIT_DIVERGED
from cliffnet.algebra import CL20
from cliffnet.fields import ADVECTION_PACKING
from cliffnet.datagen import TrajectorySet, read_clf, write_clf
from cliffnet.manifest import RunManifest
from cliffnet.renderers import read_records
from cliffnet.util import sha256_file


def read_text(path):
    with open(path) as f:
        return f.read()


def run(*argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = main(list(argv))
    return code, out.getvalue()


class CommandTestCase(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def gen(self, name='adv.clf', *extra):
        path = self.path(name)
        code, _ = run('gen', '--pde', 'advection2d', '--grid', '8', '--traj', '3',
                      '--steps', '4', '--dtype', 'f64', '-o', path, *extra)
        self.assertEqual(code, EXIT_OK)
        return path


class TestGen(CommandTestCase):
    def test_advection(self):
        path = self.gen()
        dataset = read_clf(path)
        self.assertEqual(dataset.data.shape, (3, 4, 4, 1, 8, 8))
        manifest = RunManifest.read(path + '.run.json')
        self.assertEqual(manifest.command, 'gen')
        self.assertEqual(manifest.config['pde'], 'advection2d')
        self.assertEqual(manifest.outputs[path], sha256_file(path))

    def test_same_seed_same_bytes(self):
        a = self.gen('a.clf', '--seed', '3')
        b = self.gen('b.clf', '--seed', '3')
        self.assertEqual(sha256_file(a), sha256_file(b))

    def test_maxwell(self):
        path = self.path('em.clf')
        code, _ = run('--threads', '2', 'gen', '--pde', 'maxwell3d', '--grid', '4', '--traj', '2',
                      '--steps', '2', '--substeps', '2', '-o', path)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(read_clf(path).signature, algebra.CL30)
        self.assertEqual(RunManifest.read(path + '.run.json').threads, 2)

    def test_usage_errors(self):
        code, _ = run('gen', '--pde', 'advection2d', '--velocity', 'shear', '-o', self.path('x.clf'))
        self.assertEqual(code, EXIT_USAGE)
        code, _ = run('gen', '--pde', 'maxwell3d', '--grid', '4', '--dt', '1.0', '-o', self.path('x.clf'))
        self.assertEqual(code, EXIT_USAGE)
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as cm:
                main(['gen', '--pde', 'heat', '-o', self.path('x.clf')])
        self.assertEqual(cm.exception.code, 2)

    def test_threads_env(self):
        with mock.patch.dict(os.environ, {'CLIFFORD_THREADS': 'many'}):
            code, _ = run('gen', '--pde', 'advection2d', '-o', self.path('x.clf'))
        self.assertEqual(code, EXIT_USAGE)


class TestTrainEval(CommandTestCase):
    def train(self, data, out, *extra):
        return run('train', '--data', data, '--family', 'cfno', '--blocks', '1', '--channels', '2',
                   '--modes', '2', '--epochs', '1', '--batch-size', '4', '-o', out, *extra)

    def test_train_eval_plot(self):
        data = self.gen()
        out = self.path('run')
        code, text = self.train(data, out)
        self.assertEqual(code, EXIT_OK)
        self.assertIn('onestep', text)
        self.assertTrue(os.path.isfile(os.path.join(out, 'checkpoint', 'manifest.json')))
        curve = read_records(read_text(os.path.join(out, 'curve.csv')))
        self.assertEqual([r['type'] for r in curve], ['curve'])
        manifest = RunManifest.read(os.path.join(out, 'run.json'))
        self.assertEqual(manifest.config['family'], 'cfno')
        self.assertEqual(manifest.config['blades'], [0, 1, 2])
        self.assertIn(data, manifest.inputs)

        code, text = run('eval', '--ckpt', os.path.join(out, 'checkpoint'), '--data', data,
                         '--metrics', 'onestep,scalar,rollout', '--steps', '2')
        self.assertEqual(code, EXIT_OK)
        metrics = json.loads(text)['metrics']
        self.assertEqual(sorted(metrics), ['onestep', 'rollout', 'scalar'])
        self.assertGreaterEqual(metrics['onestep'], metrics['scalar'])

        svg = self.path('curve.svg')
        code, _ = run('plot', '--in', os.path.join(out, 'curve.csv'), '-o', svg, '--title', 'cfno')
        self.assertEqual(code, EXIT_OK)
        with open(svg) as f:
            self.assertIn('<svg', f.read())
        self.assertTrue(os.path.isfile(svg + '.run.json'))

    def test_resume(self):
        data = self.gen()
        out = self.path('run')
        self.assertEqual(self.train(data, out)[0], EXIT_OK)
        ckpt = os.path.join(out, 'checkpoint')
        code, _ = run('train', '--data', data, '--epochs', '2', '--batch-size', '4',
                      '--resume', ckpt, '-o', out)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(read_records(read_text(os.path.join(out, 'curve.csv')))), 2)

    def test_config_file(self):
        data = self.gen()
        config = self.path('model.json')
        with open(config, 'w') as f:
            json.dump({'family': 'cresnet', 'blocks': 1, 'channels': 4}, f)
        out = self.path('run')
        code, _ = run('train', '--data', data, '--config', config, '--channels', '2',
                      '--epochs', '1', '-o', out)
        self.assertEqual(code, EXIT_OK)
        manifest = RunManifest.read(os.path.join(out, 'run.json'))
        self.assertEqual((manifest.config['family'], manifest.config['channels']), ('cresnet', 2))

    def test_eval_to_file(self):
        data = self.gen()
        out = self.path('run')
        self.train(data, out)
        result = self.path('metrics.json')
        code, text = run('eval', '--ckpt', os.path.join(out, 'checkpoint'), '--data', data,
                         '--metrics', 'onestep', '-o', result)
        self.assertEqual((code, text), (EXIT_OK, ''))
        with open(result) as f:
            self.assertIn('onestep', json.load(f)['metrics'])
        self.assertEqual(RunManifest.read(result + '.run.json').command, 'eval')

    def test_unknown_metric(self):
        data = self.gen()
        out = self.path('run')
        self.train(data, out)
        code, _ = run('eval', '--ckpt', os.path.join(out, 'checkpoint'), '--data', data,
                      '--metrics', 'onestep,energy')
        self.assertEqual(code, EXIT_USAGE)

    def test_io_errors(self):
        bad = self.path('bad.clf')
        with open(bad, 'wb') as f:
            f.write(b'NOPE' + b'\0' * 16)
        code, _ = self.train(bad, self.path('run'))
        self.assertEqual(code, EXIT_IO)
        code, _ = self.train(self.path('missing.clf'), self.path('run'))
        self.assertEqual(code, EXIT_IO)

    def test_divergence(self):
        data = np.zeros((2, 3, 4, 1, 4, 4))
        for k in range(3):
            data[:, k, 0] = k * 1e200
        path = self.path('huge.clf')
        write_clf(path, TrajectorySet(data, 0.1, 0.25, CL20, ADVECTION_PACKING))
        with np.errstate(all='ignore'):
            code, _ = run('train', '--data', path, '--family', 'persistence', '--epochs', '1',
                          '-o', self.path('run'))
        self.assertEqual(code, EXIT_DIVERGED)


class TestCheckBench(CommandTestCase):
    def test_check(self):
        csv = self.path('checks.csv')
        code, text = run('check', '--suite', 'algebra', '--scale', '0.01', '--csv', csv)
        self.assertEqual(code, EXIT_OK)
        self.assertIn('gp_basis_cl30', text)
        records = read_records(read_text(csv))
        self.assertTrue(all(r['passed'] for r in records))
        self.assertEqual(RunManifest.read(csv + '.run.json').config['suites'], ['algebra'])

    def test_check_failure(self):
        original = algebra.geometric_product_2d

        def swapped(a, b, signature=algebra.CL20):
            return original(b, a, signature)

        with mock.patch.object(algebra, 'geometric_product_2d', swapped):
            code, text = run('check', '--suite', 'algebra', '--scale', '0.01')
        self.assertEqual(code, EXIT_FAILED)
        self.assertIn('FAIL', text)

    def test_bench(self):
        out = self.path('bench.csv')
        code, _ = run('bench', '--op', 'gp2d', '--size', '4', '--reps', '2', '-o', out)
        self.assertEqual(code, EXIT_OK)
        records = read_records(read_text(out))
        self.assertEqual([(r['op'], r['size'], r['reps']) for r in records], [('gp2d', 4, 2)])
        code, _ = run('bench', '--op', 'fft9d')
        self.assertEqual(code, EXIT_USAGE)

    def test_version(self):
        with contextlib.redirect_stdout(io.StringIO()):
            with self.assertRaises(SystemExit) as cm:
                main(['--version'])
        self.assertEqual(cm.exception.code, 0)
