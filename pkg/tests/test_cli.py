# tests/test_cli.py
import json

from cli.rigidlab_cli import EXIT_OK, EXIT_SOLVER, EXIT_USAGE, cli

def run(runner, *args):
    return runner.invoke(cli, list(args))

class TestEval:
    def test_delta_point(self, cli_runner):
        result = run(cli_runner, 'eval', '--seed', 'delta:1', '--x', '1', '--y', '2')
        assert result.exit_code == EXIT_OK
        document = json.loads(result.stdout)
        assert document['lambda'] == [1.0, 0.5]
        assert document['alpha'] == 1.25
        assert document['beta'] == -2.0

    def test_initial_slice(self, cli_runner):
        result = run(cli_runner, 'eval', '--seed', 'exp', '--x', '0', '--y', '0')
        assert result.exit_code == EXIT_OK
        document = json.loads(result.stdout)
        assert document['lambda'] == [0.0, 1.0]
        assert document['mu'] == [0.0, 0.0]

    def test_shock_exits_two(self, cli_runner):
        result = run(cli_runner, 'eval', '--seed', 'delta:1', '--x=-1', '--y', '0')
        assert result.exit_code == EXIT_SOLVER
        assert json.loads(result.stdout)['status']['outcome'] == 'Shock'

    def test_bad_seed_exits_one(self, cli_runner):
        result = run(cli_runner, 'eval', '--seed', 'delta:-1', '--x', '0', '--y', '0')
        assert result.exit_code == EXIT_USAGE

    def test_missing_seed_exits_one(self, cli_runner):
        assert run(cli_runner, 'eval', '--x', '0', '--y', '0').exit_code == EXIT_USAGE

    def test_usage_error_exits_one(self, cli_runner):
        assert run(cli_runner, 'eval', '--seed', 'exp', '--x', 'abc', '--y', '0').exit_code == EXIT_USAGE
        assert run(cli_runner, 'frobnicate').exit_code == EXIT_USAGE

    def test_exponential_past_exp_overflow(self, cli_runner):
        result = run(cli_runner, 'eval', '--seed', 'exp', '--x', '1', '--y', '800')
        assert result.exit_code == EXIT_OK
        document = json.loads(result.stdout)
        assert document['lambda'][1] > 0
        assert document['status']['outcome'] == 'Converged'

    def test_overflowing_initial_slice_exits_two(self, cli_runner):
        result = run(cli_runner, 'eval', '--seed', 'exp', '--x', '0', '--y', '800')
        assert result.exit_code == EXIT_SOLVER
        assert json.loads(result.stdout)['status']['outcome'] == 'NonConvergence'

class TestGrid:
    def test_csv_file(self, cli_runner, output_dir):
        out = output_dir / "delta.csv"
        result = run(cli_runner, 'grid', '--seed', 'delta:1', '--grid', '0:1:3,-1:1:3', '--format', 'csv',
                     '--out', str(out))
        assert result.exit_code == EXIT_OK
        assert len(out.read_text().splitlines()) == 10

    def test_deterministic(self, cli_runner, output_dir):
        paths = [output_dir / "a.json", output_dir / "b.json"]
        for path in paths:
            result = run(cli_runner, 'grid', '--seed', 'eps:0.5', '--grid=-1:3:5,-5:5:11', '--format', 'json',
                         '--out', str(path))
            assert result.exit_code == EXIT_OK
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_missing_grid(self, cli_runner):
        assert run(cli_runner, 'grid', '--seed', 'delta:1').exit_code == EXIT_USAGE

    def test_config_file(self, cli_runner, output_dir):
        out = output_dir / "from_config.csv"
        config = output_dir / "run.json"
        config.write_text(json.dumps({'seed': {'family': 'Constant', 'params': {'c': 1}},
                                      'grid': '0:1:2,0:1:2', 'out': str(out)}))
        result = run(cli_runner, 'grid', '--config', str(config))
        assert result.exit_code == EXIT_OK
        assert len(out.read_text().splitlines()) == 5

    def test_invalid_config_file(self, cli_runner, output_dir):
        config = output_dir / "bad.json"
        config.write_text(json.dumps({'seed': 'delta:1', 'unknown': True}))
        assert run(cli_runner, 'grid', '--config', str(config), '--grid', '0:1:2,0:1:2').exit_code == EXIT_USAGE

    def test_outcome_table_on_stderr(self, cli_runner, output_dir):
        out = output_dir / "eps.csv"
        result = run(cli_runner, 'grid', '--seed', 'eps:0.5', '--grid=-1:3:5,-5:5:11', '--out', str(out))
        assert result.exit_code == EXIT_OK
        assert 'Converged' in result.stderr
        assert 'EllipticityLoss' in result.stderr
        assert 'Converged' not in result.stdout

class TestVerify:
    def test_rigidity_suite_to_stdout(self, cli_runner):
        result = run(cli_runner, 'verify', '--seed', 'eps:0.5', '--suite', 'rigidity')
        assert result.exit_code == EXIT_OK
        records = json.loads(result.stdout)
        assert len(records) == 4
        assert all(record['pass'] for record in records)

    def test_report_file(self, cli_runner, output_dir):
        out = output_dir / "report.json"
        result = run(cli_runner, 'verify', '--seed', 'nonholo:1,0.2', '--suite', 'obstruction', '--out', str(out))
        assert result.exit_code == EXIT_OK
        assert result.stdout == ""
        assert {record['name'] for record in json.loads(out.read_text())} == {'obstruction', 'poincare'}

    def test_unknown_suite(self, cli_runner):
        assert run(cli_runner, 'verify', '--seed', 'exp', '--suite', 'everything').exit_code == EXIT_USAGE

    def test_all_suites_cauchy(self, cli_runner):
        result = run(cli_runner, 'verify', '--seed', 'cauchy:1', '--suite', 'all')
        assert result.exit_code == EXIT_OK
        records = json.loads(result.stdout)
        assert {'rigidity', 'seed_recovery', 'cauchy_characteristic'} <= {record['name'] for record in records}

class TestShockAndLeaf:
    def test_shock_line(self, cli_runner, output_dir):
        out = output_dir / "shock.csv"
        result = run(cli_runner, 'shock', '--seed', 'delta:1', '--grid=-1.5:-0.5:11,-1:1:5', '--out', str(out))
        assert result.exit_code == EXIT_OK
        rows = out.read_text().splitlines()
        assert rows[0] == "x,y"
        assert len(rows) == 6
        assert all(abs(float(row.split(',')[0]) + 1) < 1e-6 for row in rows[1:])

    def test_leaf_constant(self, cli_runner, output_dir):
        out = output_dir / "leaf.json"
        result = run(cli_runner, 'leaf', '--seed', 'const:1', '--grid=-1:1:3,-1:1:3', '--format', 'json',
                     '--out', str(out))
        assert result.exit_code == EXIT_OK
        assert json.loads(out.read_text()) == [[0.0, 0.0]] * 9
