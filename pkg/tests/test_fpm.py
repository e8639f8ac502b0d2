import numpy as np
import pytest

from gridiron import bt_model, fpm, ranking, stats_kit
from gridiron.core_data import GameRecord, SeasonDataset, TeamGameStat
from gridiron.fpm import (
    BadParams, BootstrapConfig, Decision, DegenerateSampleSize, NoHistory,
    PerfMatrix, SingleSeason, SynthesisParams, TooFewRows, audit_provenance,
    baseline_predict, bootstrap_vectors, correlation_blocks, evaluate,
    performance_matrix, predict_game, resample_weights, standings_through,
    synthesize_seasons, training_stat_columns,
)


def stat_row(game_id, team, total=300, passing=180, penalty=40, to=1, poss=1800):
    return TeamGameStat(game_id, team, total, passing, total - passing,
                        penalty, to, poss)


def tiny_dataset():
    """Two teams, hand-built single season with a bye for team A in week 3."""
    games, stats = {}, {}
    weeks_ab = [1, 2, 4, 5, 6]  # A plays B except week 3
    for w in weeks_ab:
        gid = f"w{w}"
        games[gid] = GameRecord(gid, 2009, w, "A", "B", 20 + w, 10, False)
        stats[(gid, "A")] = stat_row(gid, "A", total=300 + w)
        stats[(gid, "B")] = stat_row(gid, "B", total=250)
    gid = "w3"
    games[gid] = GameRecord(gid, 2009, 3, "C", "D", 14, 7, False)
    stats[(gid, "C")] = stat_row(gid, "C")
    stats[(gid, "D")] = stat_row(gid, "D", total=200, passing=120)
    return SeasonDataset(games=games, stats=stats)


class TestPerformanceMatrix:
    def test_rows_through_cutoff(self, small_synth):
        team = sorted({g.home_team for g in small_synth.games.values()})[0]
        matrix = performance_matrix(small_synth, team, (2001, 6))
        assert matrix.rows.shape == (5, 5)
        assert matrix.weeks == [1, 2, 3, 4, 5]

    def test_bye_week_team(self):
        ds = tiny_dataset()
        matrix = performance_matrix(ds, "A", (2009, 6))
        assert len(matrix.game_ids) == 4  # weeks 1,2,4,5

    def test_no_leakage_of_current_week(self, small_synth):
        team = sorted({g.home_team for g in small_synth.games.values()})[0]
        matrix = performance_matrix(small_synth, team, (2001, 6))
        for gid in matrix.game_ids:
            assert small_synth.games[gid].week < 6

    def test_no_history(self):
        with pytest.raises(NoHistory):
            performance_matrix(tiny_dataset(), "A", (2009, 1))


class TestCorrelationBlocks:
    def test_detects_injected_yards_possession_link(self, small_synth):
        columns = training_stat_columns(small_synth, small_synth.seasons())
        blocks = correlation_blocks(columns, threshold=0.3)
        linked = next(b for b in blocks if len(b) > 1)
        names = {fpm.STAT_COLUMNS[i] for i in linked}
        assert names == {"total_yards", "possession_seconds"}

    def test_threshold_one_gives_singletons(self, small_synth):
        columns = training_stat_columns(small_synth, small_synth.seasons())
        blocks = correlation_blocks(columns, threshold=1.0)
        assert blocks == [(0,), (1,), (2,), (3,), (4,)]

    def test_fully_correlated_columns_one_block(self):
        base = np.linspace(1.0, 50.0, 40)
        columns = {name: base * (i + 1) for i, name in enumerate(fpm.STAT_COLUMNS)}
        blocks = correlation_blocks(columns, threshold=0.0)
        assert blocks == [(0, 1, 2, 3, 4)]

    def test_too_few_rows(self):
        columns = {name: np.arange(10.0) for name in fpm.STAT_COLUMNS}
        with pytest.raises(TooFewRows):
            correlation_blocks(columns, threshold=0.3)


class TestBootstrap:
    def test_single_row_matrix(self):
        matrix = PerfMatrix("A", np.array([[300.0, 40.0, 1.0, 1800.0, 0.6]]),
                            ["g"], [1])
        cfg = BootstrapConfig(n_resamples=50, seed=1)
        vectors = bootstrap_vectors(matrix, cfg, [(0, 1, 2, 3, 4)], game_index=7)
        assert np.all(vectors == matrix.rows[0])

    def test_recency_weights_exact(self):
        cfg = BootstrapConfig(recency_window=5, recency_multiplier=2.0)
        w = resample_weights(6, cfg)
        assert w[0] == pytest.approx(1.0 / 11.0, abs=1e-15)
        assert np.all(w[1:] == pytest.approx(2.0 / 11.0, abs=1e-15))
        assert w.sum() == pytest.approx(1.0)

    def test_uniform_draw_frequencies(self):
        rows = np.arange(20.0).reshape(4, 5)
        matrix = PerfMatrix("A", rows, list("abcd"), [1, 2, 3, 4])
        cfg = BootstrapConfig(n_resamples=100_000, recency_multiplier=1.0, seed=3)
        vectors = bootstrap_vectors(matrix, cfg, [(0, 1, 2, 3, 4)], game_index=11)
        drawn = vectors[:, 0]  # first column identifies the row
        sd = np.sqrt(0.25 * 0.75 / cfg.n_resamples)
        for row in range(4):
            freq = np.mean(drawn == rows[row, 0])
            assert abs(freq - 0.25) < 3 * sd + 1e-9

    def test_biased_draw_frequencies(self):
        rows = np.arange(30.0).reshape(6, 5)
        matrix = PerfMatrix("A", rows, list("abcdef"), [1, 2, 3, 4, 5, 6])
        cfg = BootstrapConfig(n_resamples=100_000, recency_window=5,
                              recency_multiplier=2.0, seed=4)
        vectors = bootstrap_vectors(matrix, cfg, [(0, 1, 2, 3, 4)], game_index=11)
        freq_oldest = np.mean(vectors[:, 0] == rows[0, 0])
        p = 1.0 / 11.0
        assert abs(freq_oldest - p) < 3 * np.sqrt(p * (1 - p) / cfg.n_resamples)

    def test_blocks_draw_jointly(self):
        rng = np.random.default_rng(5)
        rows = rng.normal(size=(8, 5))
        matrix = PerfMatrix("A", rows, [f"g{i}" for i in range(8)], list(range(1, 9)))
        cfg = BootstrapConfig(n_resamples=500, seed=6)
        vectors = bootstrap_vectors(matrix, cfg, [(0, 3), (1,), (2,), (4,)], game_index=2)
        # columns 0 and 3 must always come from the same source row
        for v in vectors:
            row_idx = np.where(rows[:, 0] == v[0])[0][0]
            assert v[3] == rows[row_idx, 3]

    def test_deterministic_given_key(self):
        rows = np.arange(15.0).reshape(3, 5)
        matrix = PerfMatrix("A", rows, list("abc"), [1, 2, 3])
        cfg = BootstrapConfig(n_resamples=64, seed=9)
        a = bootstrap_vectors(matrix, cfg, [(0, 1, 2, 3, 4)], game_index=1)
        b = bootstrap_vectors(matrix, cfg, [(0, 1, 2, 3, 4)], game_index=1)
        c = bootstrap_vectors(matrix, cfg, [(0, 1, 2, 3, 4)], game_index=2)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_prefix_stable_when_b_grows(self):
        rows = np.arange(25.0).reshape(5, 5)
        matrix = PerfMatrix("A", rows, list("abcde"), [1, 2, 3, 4, 5])
        small = bootstrap_vectors(matrix, BootstrapConfig(n_resamples=100, seed=9),
                                  [(0, 1, 2, 3, 4)], game_index=3)
        large = bootstrap_vectors(matrix, BootstrapConfig(n_resamples=200, seed=9),
                                  [(0, 1, 2, 3, 4)], game_index=3)
        assert np.array_equal(large[:100], small)


def zero_model():
    return bt_model.FittedBTModel(intercept=0.0, coefficients=np.zeros(6),
                                  standard_errors=np.ones(7), p_values=np.ones(7),
                                  n_obs=0, log_likelihood=0.0)


class TestPredictGame:
    def test_degenerate_sample_size(self, small_synth):
        game = small_synth.regular_games(2001)[40]
        tables = ranking.season_rank_tables(small_synth.games.values())
        with pytest.raises(DegenerateSampleSize):
            predict_game(small_synth, zero_model(), tables, game,
                         BootstrapConfig(n_resamples=1))

    def test_mirror_teams_exact_tie(self):
        games = {"m1": GameRecord("m1", 2009, 6, "A", "B", 20, 10, False)}
        stats = {("m1", "A"): stat_row("m1", "A"), ("m1", "B"): stat_row("m1", "B")}
        hist = {}
        for w in range(1, 6):
            gid = f"h{w}"
            games[gid] = GameRecord(gid, 2009, w, "A", "B", 20, 10, False)
            stats[(gid, "A")] = stat_row(gid, "A")
            stats[(gid, "B")] = stat_row(gid, "B")
        ds = SeasonDataset(games=games, stats=stats)
        # single-row identical matrices: every resample is that row
        table = ranking.RankTable(season=2009, week=6, score={"A": 0.5, "B": 0.5},
                                  rank={"A": 1, "B": 1})
        matrix_cut = (2009, 2)  # only week-1 history: one identical row each
        game = GameRecord("m2", 2009, 2, "A", "B", 20, 10, False)
        ds.games["m2"] = game
        pred = predict_game(ds, zero_model(), {(2009, 2): table}, game,
                            BootstrapConfig(n_resamples=100, seed=5),
                            blocks=[(0, 1, 2, 3, 4)])
        assert pred.p_home_mean == 0.5
        assert pred.p_home_sd == 0.0
        assert pred.p_value == 1.0
        assert pred.decision is Decision.TIE

    def test_seeded_repeatability(self, small_synth):
        tables = ranking.season_rank_tables(small_synth.games.values())
        feats = bt_model.build_features(small_synth, tables,
                                        include_seasons=[2001, 2002, 2003])
        model = bt_model.fit(feats)
        game = small_synth.regular_games(2004)[40]
        cfg = BootstrapConfig(n_resamples=128, seed=77)
        blocks = correlation_blocks(
            training_stat_columns(small_synth, [2001, 2002, 2003]), 0.3)
        a = predict_game(small_synth, model, tables, game, cfg, blocks=blocks)
        b = predict_game(small_synth, model, tables, game, cfg, blocks=blocks)
        assert a == b

    def test_compat_pairing_changes_result(self, small_synth):
        tables = ranking.season_rank_tables(small_synth.games.values())
        feats = bt_model.build_features(small_synth, tables,
                                        include_seasons=[2001, 2002, 2003])
        model = bt_model.fit(feats)
        game = small_synth.regular_games(2004)[40]
        blocks = correlation_blocks(
            training_stat_columns(small_synth, [2001, 2002, 2003]), 0.3)
        a = predict_game(small_synth, model, tables, game,
                         BootstrapConfig(n_resamples=128, seed=77), blocks=blocks)
        b = predict_game(small_synth, model, tables, game,
                         BootstrapConfig(n_resamples=128, seed=77,
                                         away_uses_first_resample=True),
                         blocks=blocks)
        assert a.p_home_mean != b.p_home_mean

    def test_doubling_resamples_converges(self, small_synth):
        tables = ranking.season_rank_tables(small_synth.games.values())
        feats = bt_model.build_features(small_synth, tables,
                                        include_seasons=[2001, 2002, 2003])
        model = bt_model.fit(feats)
        game = small_synth.regular_games(2004)[40]
        blocks = correlation_blocks(
            training_stat_columns(small_synth, [2001, 2002, 2003]), 0.3)
        b = 2000
        small = predict_game(small_synth, model, tables, game,
                             BootstrapConfig(n_resamples=b, seed=77), blocks=blocks)
        large = predict_game(small_synth, model, tables, game,
                             BootstrapConfig(n_resamples=2 * b, seed=77), blocks=blocks)
        assert abs(large.p_home_mean - small.p_home_mean) < 3 * small.p_home_sd / np.sqrt(b)

    def test_mean_test_matches_paired_two_set_formulation(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            p1 = rng.uniform(0.2, 0.9, size=50)
            ours = fpm._mean_test_vs_half(p1)
            paired = stats_kit.paired_t_test(p1, 1.0 - p1)
            assert ours == pytest.approx(paired.p_value, abs=1e-12)


class TestBaseline:
    def test_better_record_wins(self):
        games = {}
        for w in range(1, 6):
            gid = f"w{w}"
            winner_home = w != 2  # home team A wins 4 of 5, B wins 1
            games[gid] = GameRecord(gid, 2009, w, "A", "B",
                                    21 if winner_home else 7,
                                    7 if winner_home else 21, False)
        ds = SeasonDataset(games=games)
        st = standings_through(ds, 2009, 6)
        assert st.record["A"] == (4, 1, 0)
        game = GameRecord("x", 2009, 6, "B", "A", 0, 0, False)
        assert baseline_predict(st, game) == "A"

    def test_equal_records_home_team(self):
        games = {"w1": GameRecord("w1", 2009, 1, "A", "B", 21, 7, False),
                 "w2": GameRecord("w2", 2009, 2, "B", "A", 21, 7, False)}
        st = standings_through(SeasonDataset(games=games), 2009, 3)
        game = GameRecord("x", 2009, 3, "B", "A", 0, 0, False)
        assert baseline_predict(st, game) == "B"

    def test_unbeaten_away_team(self):
        games = {}
        for w in range(1, 6):
            games[f"w{w}"] = GameRecord(f"w{w}", 2009, w, "A", "B", 0, 10, False)
        st = standings_through(SeasonDataset(games=games), 2009, 6)
        game = GameRecord("x", 2009, 6, "A", "B", 0, 0, False)
        assert baseline_predict(st, game) == "B"


class TestEvaluate:
    def test_single_season_rejected(self, mini_dataset):
        with pytest.raises(SingleSeason):
            evaluate(mini_dataset, BootstrapConfig(n_resamples=4))

    def test_report_shape_and_audit(self, small_synth):
        cfg = BootstrapConfig(n_resamples=32, seed=5)
        report = evaluate(small_synth, cfg, start_week=6)
        seasons = small_synth.seasons()
        assert [s.season for s in report.seasons] == seasons
        n_predictions = len(report.predictions)
        assert n_predictions == sum(s.n_games for s in report.seasons)
        assert sum(b.n_games for b in report.calibration) == n_predictions
        for s in report.seasons:
            assert 0.0 <= s.engine_accuracy <= 1.0
            assert 0.0 <= s.baseline_accuracy <= 1.0
        assert report.rng_algorithm == "PCG64"
        assert audit_provenance(small_synth, report) == []

    def test_threads_do_not_change_results(self, small_synth):
        cfg = BootstrapConfig(n_resamples=32, seed=5)
        serial = evaluate(small_synth, cfg, start_week=6, threads=1)
        threaded = evaluate(small_synth, cfg, start_week=6, threads=8)
        assert serial.predictions == threaded.predictions
        assert serial.seasons == threaded.seasons

    def test_audit_catches_planted_leak(self, small_synth):
        from dataclasses import replace
        cfg = BootstrapConfig(n_resamples=16, seed=5)
        report = evaluate(small_synth, cfg, start_week=6)
        prov = report.provenance[0]
        future_game = next(g.game_id for g in small_synth.games.values()
                           if g.season == prov.season and g.week >= prov.week)
        report.provenance[0] = replace(
            prov, home_matrix_game_ids=prov.home_matrix_game_ids + (future_game,))
        violations = audit_provenance(small_synth, report)
        assert violations and "home matrix" in violations[0]


class TestSynthesize:
    def test_schedule_is_weekly_round_robin(self, small_synth):
        for season in small_synth.seasons():
            games = small_synth.regular_games(season)
            by_week = {}
            for g in games:
                by_week.setdefault(g.week, []).append(g)
            for week, wgames in by_week.items():
                teams = [t for g in wgames for t in (g.home_team, g.away_team)]
                assert len(teams) == len(set(teams)) == 8

    def test_zero_truth_gives_half_home_rate(self):
        params = SynthesisParams(intercept=0.0, coefficients=(0.0,) * 6,
                                 n_seasons=10, n_teams=16, weeks=17, seed=21)
        ds = synthesize_seasons(params)
        games = ds.regular_games()
        rate = np.mean([g.winner == g.home_team for g in games])
        sd = np.sqrt(0.25 / len(games))
        assert abs(rate - 0.5) < 4 * sd

    def test_intercept_only_home_rate(self):
        params = SynthesisParams(intercept=0.22, coefficients=(0.0,) * 6,
                                 n_seasons=10, n_teams=16, weeks=17, seed=22)
        ds = synthesize_seasons(params)
        games = ds.regular_games()
        rate = np.mean([g.winner == g.home_team for g in games])
        expected = 1.0 / (1.0 + np.exp(-0.22))
        sd = np.sqrt(expected * (1 - expected) / len(games))
        assert abs(rate - expected) < 4 * sd

    def test_injected_correlation_recovered(self):
        params = SynthesisParams(n_seasons=10, n_teams=32, weeks=17, seed=23)
        ds = synthesize_seasons(params)
        columns = training_stat_columns(ds, ds.seasons())
        assert len(columns["total_yards"]) >= 5000
        corr = np.corrcoef(columns["total_yards"], columns["possession_seconds"])[0, 1]
        assert abs(corr - params.yards_possession_corr) < 0.05

    def test_dataset_validates_cleanly(self, small_synth):
        from gridiron.core_data import validate_dataset
        report = validate_dataset(small_synth)
        assert report.errors == []
        assert report.warnings == []

    def test_bad_params(self):
        with pytest.raises(BadParams):
            SynthesisParams(n_teams=7)
        with pytest.raises(BadParams):
            SynthesisParams(coefficients=(1.0, 2.0))
