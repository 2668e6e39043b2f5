import os
import tempfile
import numpy as np
from unittest import TestCase
from numpy.testing import assert_allclose, assert_array_equal
from cliffnet import autodiff as ad
from cliffnet.algebra import CL20
from cliffnet.fields import ADVECTION_PACKING, MAXWELL_PACKING
from cliffnet.datagen import TrajectorySet, gen_advection2d
from cliffnet.models import SurrogateConfig, FAMILIES, create_model, import_model
from cliffnet.models.metrics import smse, field_blades, Metrics, rollout, evaluate
from cliffnet.models.optim import Adam, cosine_schedule
from cliffnet.models.checkpoint import save_checkpoint, load_checkpoint, MANIFEST_FILE, PARAMS_FILE
from cliffnet.models.train import split_trajectories, training_windows, check_dataset, train
from cliffnet.errors import ShapeError, PackingError, DivergenceError


def tiny_config(family='cfno', **kwargs):
    params = dict(family=family, blocks=1, channels=2, modes=2, blades=[0, 1, 2], seed=1)
    params.update(kwargs)
    return SurrogateConfig(**params)


def advection_set(trajectories=3, steps=4):
    return gen_advection2d(grid=8, trajectories=trajectories, steps=steps, dtype=np.float64)


class TestConfig(TestCase):
    def test_defaults(self):
        config = SurrogateConfig()
        self.assertEqual(config.family, 'cfno')
        self.assertEqual(config.ndim, 2)
        self.assertEqual(config.modes, [8, 8])
        self.assertFalse(config.norm)
        self.assertTrue(SurrogateConfig(family='cresnet').norm)
        self.assertTrue(config.clifford)
        self.assertFalse(SurrogateConfig(family='fno').clifford)

    def test_dict_roundtrip(self):
        config = tiny_config(history=2, faithful=True)
        self.assertEqual(SurrogateConfig.from_dict(config.to_dict()), config)
        self.assertEqual(config.replace(channels=4).channels, 4)
        self.assertEqual(config.replace(channels=None).channels, 2)

    def test_unknown_key(self):
        with self.assertRaises(ValueError):
            SurrogateConfig.from_dict({'family': 'cfno', 'depth': 3})

    def test_desk(self):
        self.assertEqual(SurrogateConfig.desk('cfno').channels, 16)
        self.assertEqual(SurrogateConfig.desk('fno').channels, 32)
        config = SurrogateConfig.desk('cfno', '3,0')
        self.assertEqual((config.ndim, config.blocks, config.channels, config.modes), (3, 2, 8, [4, 4, 4]))

    def test_invalid(self):
        with self.assertRaises(ValueError):
            SurrogateConfig(family='unet')
        with self.assertRaises(ValueError):
            SurrogateConfig(family='cresnet_rot', signature='3,0')
        with self.assertRaises(ValueError):
            SurrogateConfig(family='cfno', signature='2,0', ndim=3)
        with self.assertRaises(ValueError):
            SurrogateConfig(kernel_size=2)
        with self.assertRaises(ShapeError):
            SurrogateConfig(family='fno', ndim=1)
        # real baselines fold the blades into channels on any grid
        self.assertEqual(SurrogateConfig(family='fno', signature='3,0', ndim=2).ndim, 2)

    def test_import_model(self):
        self.assertEqual(import_model('cfno').__name__, 'CliffordFNO')
        self.assertIs(import_model('cliffnet.models.fno.FNO'), import_model('fno'))
        with self.assertRaises(ValueError):
            import_model('unet')


class TestFamilies(TestCase):
    def test_forward_shapes(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal((2, 2, 4, 1, 8, 8))
        for family in FAMILIES:
            model = create_model(tiny_config(family, history=2))
            out = model(x).value
            self.assertEqual(out.shape, (2, 4, 1, 8, 8), family)
            # e12 carries no advection field
            assert_array_equal(out[:, 3], 0.0)

    def test_3d(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((1, 1, 8, 1, 4, 4, 4))
        for family in ('cfno', 'cresnet'):
            model = create_model(family=family, signature='3,0', blocks=1, channels=1, modes=1)
            self.assertEqual(model(x).shape, (1, 8, 1, 4, 4, 4))

    def test_persistence(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((2, 3, 4, 1, 4, 4))
        model = create_model(tiny_config('persistence', history=3))
        self.assertEqual(model.parameter_count(), 0)
        want = x[:, -1].copy()
        want[:, 3] = 0.0
        assert_array_equal(model(x).value, want)

    def test_history_checked(self):
        model = create_model(tiny_config(history=2))
        with self.assertRaises(ShapeError):
            model(np.zeros((1, 3, 4, 1, 8, 8)))
        with self.assertRaises(ShapeError):
            model(np.zeros((1, 2, 4, 2, 8, 8)))

    def test_seeded(self):
        a = create_model(tiny_config('cresnet')).state_dict()
        b = create_model(tiny_config('cresnet')).state_dict()
        for name in a:
            assert_array_equal(a[name], b[name])

    def test_parameter_parity(self):
        cfno = create_model(SurrogateConfig.desk('cfno', blades=[0, 1, 2])).parameter_count()
        fno = create_model(SurrogateConfig.desk('fno', blades=[0, 1, 2])).parameter_count()
        self.assertLess(abs(cfno - fno) / fno, 0.01)

    def test_faithful_parameters(self):
        full = create_model(tiny_config('cresnet_rot')).parameter_count()
        faithful = create_model(tiny_config('cresnet_rot', faithful=True)).parameter_count()
        # two rotational convolutions lose W4 and W5
        self.assertEqual(full - faithful, 2 * 2 * 2 * 2 * 9)


class TestMetrics(TestCase):
    def test_smse(self):
        pred = np.zeros((2, 4, 1, 4, 4))
        target = np.ones((2, 4, 1, 4, 4))
        self.assertEqual(smse(pred, target, [0]), 1.0)
        self.assertEqual(smse(pred, target), 4.0)
        # time steps are summed
        self.assertEqual(smse(np.zeros((2, 3, 4, 1, 4, 4)), np.ones((2, 3, 4, 1, 4, 4))), 12.0)

    def test_smse_tensor(self):
        pred = ad.Parameter(np.zeros((1, 4, 1, 2, 2)))
        loss = smse(pred, np.ones((1, 4, 1, 2, 2)), [1, 2])
        self.assertIsInstance(loss, ad.Tensor)
        self.assertAlmostEqual(float(loss.value), 2.0)
        g, = ad.grad(loss, [pred])
        assert_allclose(g[0, 1], -0.5)
        assert_allclose(g[0, 0], 0.0)

    def test_smse_shape(self):
        with self.assertRaises(ShapeError):
            smse(np.zeros((1, 4, 1, 2, 2)), np.zeros((1, 4, 1, 2, 3)))
        with self.assertRaises(ShapeError):
            smse(np.zeros((4, 2, 2)), np.zeros((4, 2, 2)))

    def test_field_blades(self):
        self.assertEqual(field_blades(ADVECTION_PACKING, CL20), [0, 1, 2])
        self.assertEqual(field_blades(ADVECTION_PACKING, CL20, 'scalar'), [0])
        self.assertEqual(field_blades(ADVECTION_PACKING, CL20, 'vector'), [1, 2])
        from cliffnet.algebra import CL30
        self.assertEqual(field_blades(MAXWELL_PACKING, CL30, 'electric'), [1, 2, 3])
        self.assertEqual(field_blades(MAXWELL_PACKING, CL30, 'magnetic'), [4, 5, 6])
        with self.assertRaises(ValueError):
            field_blades(ADVECTION_PACKING, CL20, 'energy')

    def test_non_negative(self):
        metrics = Metrics()
        metrics['onestep'] = 0.0
        metrics['rollout'] = None
        with self.assertRaises(ValueError):
            metrics['scalar'] = -1.0

    def test_persistence_rollout(self):
        dataset = advection_set()
        model = create_model(tiny_config('persistence'))
        history = dataset.data[:, :1]
        trajectory, loss = rollout(model, history, 3, dataset.data[:, 1:4], [0, 1, 2])
        self.assertEqual(trajectory.shape, (3, 3, 4, 1, 8, 8))
        assert_allclose(trajectory[:, 2, :3], dataset.data[:, 0, :3])
        want = smse(np.repeat(history, 3, axis=1), dataset.data[:, 1:4], [0, 1, 2])
        self.assertAlmostEqual(loss, want)

    def test_rollout_divergence(self):
        class Exploding:
            ndim = 2

            def __call__(self, window):
                return ad.Tensor(np.full(window.shape[:1] + window.shape[2:], np.nan))

        with self.assertRaises(DivergenceError) as cm:
            rollout(Exploding(), np.zeros((1, 1, 4, 1, 4, 4)), 2)
        self.assertEqual(cm.exception.step, 0)

    def test_evaluate(self):
        dataset = advection_set()
        model = create_model(tiny_config('persistence'))
        result = evaluate(model, dataset, ('onestep', 'scalar', 'vector', 'rollout'), steps=2)
        total = 0.0
        for n in range(3):
            for k in range(1, 4):
                total += smse(dataset.data[n, k - 1:k], dataset.data[n, k:k + 1], [0], 2)
        self.assertAlmostEqual(result['scalar'], total / 9)
        # constant velocity: the vector blades never change
        self.assertAlmostEqual(result['vector'], 0.0)
        self.assertGreaterEqual(result['onestep'], result['scalar'])
        self.assertGreater(result['rollout'], 0.0)

    def test_short_rollout(self):
        dataset = advection_set(steps=2)
        model = create_model(tiny_config('persistence'))
        with self.assertLogs('cliffnet.models.metrics', 'WARNING'):
            result = evaluate(model, dataset, ('rollout',), steps=5)
        self.assertIsNone(result['rollout'])


class TestOptim(TestCase):
    def test_schedule(self):
        self.assertAlmostEqual(cosine_schedule(0, 100, 1.0), 0.2)
        self.assertAlmostEqual(cosine_schedule(5, 100, 1.0), 1.0)
        self.assertLess(cosine_schedule(99, 100, 1.0), 1e-3)
        self.assertAlmostEqual(cosine_schedule(200, 100, 1.0), 0.0)

    def test_first_step(self):
        p = ad.Parameter([3.0])
        opt = Adam([p], lr=0.1)
        opt.step([np.array([6.0])])
        assert_allclose(p.value, [2.9])

    def test_converges(self):
        p = ad.Parameter([5.0, -3.0])
        opt = Adam([p], lr=0.1)
        for step in range(300):
            opt.step(ad.grad((p * p).sum(), [p]), lr=cosine_schedule(step, 300, 0.1))
        self.assertLess(np.abs(p.value).max(), 0.1)

    def test_state(self):
        p = ad.Parameter(np.ones(3))
        opt = Adam([p])
        opt.step([np.ones(3)])
        other = Adam([ad.Parameter(np.ones(3))])
        other.load_state_dict(opt.state_dict())
        self.assertEqual(other.t, 1)
        assert_array_equal(other.m[0], opt.m[0])
        with self.assertRaises(ValueError):
            Adam([]).load_state_dict(opt.state_dict())


class TestCheckpoint(TestCase):
    def test_roundtrip(self):
        model = create_model(tiny_config('cresnet'))
        opt = Adam(model.parameters())
        opt.step([np.ones(p.shape) for p in model.parameters()])
        with tempfile.TemporaryDirectory() as d:
            save_checkpoint(d, model, opt, step=7, epoch=2, curve=[(3, 1.5, None), (7, 1.0, 2.0)])
            ckpt = load_checkpoint(d)
        self.assertEqual(ckpt.config, model.config)
        self.assertEqual((ckpt.step, ckpt.epoch), (7, 2))
        self.assertEqual(ckpt.curve, [(3, 1.5, None), (7, 1.0, 2.0)])
        self.assertEqual(ckpt.manifest['blade_order'], ['1', 'e1', 'e2', 'e12'])
        self.assertEqual(ckpt.optimizer_state['t'], 1)
        for name, value in model.state_dict().items():
            assert_array_equal(ckpt.model.state_dict()[name], value)
        assert_array_equal(ckpt.optimizer_state['v'][0], opt.v[0])

    def test_without_optimizer(self):
        model = create_model(tiny_config())
        with tempfile.TemporaryDirectory() as d:
            save_checkpoint(d, model)
            self.assertIsNone(load_checkpoint(d).optimizer_state)

    def test_not_a_checkpoint(self):
        with tempfile.TemporaryDirectory() as d:
            with open(os.path.join(d, MANIFEST_FILE), 'w') as f:
                f.write('{"format": "other"}')
            with self.assertRaises(ValueError):
                load_checkpoint(d)

    def test_truncated(self):
        model = create_model(tiny_config())
        with tempfile.TemporaryDirectory() as d:
            save_checkpoint(d, model)
            path = os.path.join(d, PARAMS_FILE)
            with open(path, 'rb') as f:
                raw = f.read()
            with open(path, 'wb') as f:
                f.write(raw[:-8])
            with self.assertRaises(ShapeError):
                load_checkpoint(d)


class TestTrain(TestCase):
    def test_split(self):
        train_idx, valid_idx = split_trajectories(16, 0.1, seed=3)
        self.assertEqual(len(valid_idx), 2)
        self.assertEqual(sorted(train_idx + valid_idx), list(range(16)))
        self.assertEqual(split_trajectories(16, 0.1, seed=3), (train_idx, valid_idx))
        self.assertEqual(len(split_trajectories(3, 0.1)[1]), 1)
        self.assertEqual(split_trajectories(1, 0.5), ([0], []))
        with self.assertRaises(ValueError):
            split_trajectories(4, 1.0)

    def test_windows(self):
        self.assertEqual(training_windows([0, 2], 3, 1), [(0, 1), (0, 2), (2, 1), (2, 2)])
        with self.assertRaises(ShapeError):
            training_windows([0], 2, 2)

    def test_check_dataset(self):
        dataset = advection_set()
        check_dataset(tiny_config(), dataset)
        with self.assertRaises(ValueError):
            check_dataset(SurrogateConfig(family='cfno', signature='3,0'), dataset)
        with self.assertRaises(ShapeError):
            check_dataset(tiny_config(data_channels=2), dataset)
        with self.assertRaises(PackingError):
            check_dataset(tiny_config(blades=[0, 1]), dataset)

    def test_deterministic(self):
        dataset = advection_set()
        first = train(tiny_config(), dataset, epochs=2, batch_size=4, valid_fraction=0.3)
        second = train(tiny_config(), dataset, epochs=2, batch_size=4, valid_fraction=0.3)
        self.assertEqual(first.curve, second.curve)
        self.assertEqual(len(first.curve), 2)
        # 2 training trajectories x 3 windows, batches of 4
        self.assertEqual([row[0] for row in first.curve], [2, 4])
        self.assertIsNotNone(first.final_valid)

    def test_resume(self):
        dataset = advection_set()
        with tempfile.TemporaryDirectory() as d:
            first = train(tiny_config(), dataset, epochs=2, batch_size=4, out_dir=d)
            resumed = train(None, dataset, epochs=3, batch_size=4, resume=d, out_dir=d)
            self.assertEqual(load_checkpoint(d).epoch, 3)
        self.assertEqual(resumed.curve[:2], first.curve)
        self.assertEqual(len(resumed.curve), 3)
        self.assertEqual(resumed.step, 6)

    def test_hooks(self):
        rows = []
        train(tiny_config('persistence'), advection_set(), epochs=2,
              hooks=[lambda model, epoch, row: rows.append((epoch, row[0]))])
        self.assertEqual([epoch for epoch, _ in rows], [0, 1])

    def test_divergence(self):
        data = np.zeros((2, 3, 4, 1, 4, 4))
        for k in range(3):
            data[:, k, 0] = k * 1e200
        dataset = TrajectorySet(data, 0.1, 0.25, CL20, ADVECTION_PACKING)
        with np.errstate(all='ignore'):
            with self.assertRaises(DivergenceError) as cm:
                train(tiny_config('persistence'), dataset, epochs=1, valid_fraction=0.0)
        self.assertEqual(cm.exception.step, 0)
