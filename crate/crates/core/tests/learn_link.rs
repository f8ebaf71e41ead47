//! Behavioral properties of the Learn-and-Link planners and the baselines.

use std::collections::HashSet;

use llplan::baselines::{rrt_connect, RrtParams};
use llplan::criticality::sample_free;
use llplan::geometry::{Aabb, Configuration, Environment, Obstacle, Robot, Vec2};
use llplan::planner::{
    ll_build, llp_plan, llrm_build, llrm_plan, validate_path, Budget, BuildParams, LinkEvent, LinkStatus, LlOutput,
    PlanStatus, PlannerObserver, Roadmap,
};
use llplan::worlds;
use llplan::Rng;

/// Checks the forest invariants after every link attempt.
#[derive(Default)]
struct ForestAudit {
    events: usize,
    linked: usize,
    violations: Vec<String>,
    samples: Vec<Configuration>,
    /// Configurations present at the previous event of the current run.
    seen: HashSet<Vec<u64>>,
}

fn config_bits(rm: &Roadmap) -> HashSet<Vec<u64>> {
    rm.graphs()
        .flat_map(|g| g.vertices())
        .map(|v| v.q.as_slice().iter().map(|c| c.to_bits()).collect())
        .collect()
}

impl PlannerObserver for ForestAudit {
    fn on_sample(&mut self, q: &Configuration) {
        self.samples.push(q.clone());
    }

    fn on_link(&mut self, e: &LinkEvent, rm: &Roadmap, current: usize) {
        self.events += 1;
        let mut fail = |m: String| self.violations.push(m);
        if e.live_after > e.live_before {
            fail(format!("live graphs grew {} -> {}", e.live_before, e.live_after));
        }
        if e.live_before - e.live_after != e.merged {
            fail(format!(
                "merged {} but live went {} -> {}",
                e.merged, e.live_before, e.live_after
            ));
        }
        if (e.status == LinkStatus::Linked) != (e.live_after == 1) || rm.live_count() != e.live_after {
            fail(format!("status {:?} with {} live graphs", e.status, rm.live_count()));
        }
        if e.status == LinkStatus::Connected && e.merged == 0 {
            fail("Connected without a merge".into());
        }
        if e.vertex_total_after < e.vertex_total_before {
            fail("vertex total decreased".into());
        }
        match rm.graph(current) {
            Some(g) if g.is_connected() => {}
            _ => fail("current graph missing or disconnected".into()),
        }
        let now = config_bits(rm);
        if !self.seen.is_subset(&now) {
            fail("a merge lost vertices".into());
        }
        self.seen = now;
        if e.status == LinkStatus::Linked {
            self.linked += 1;
        }
    }
}

fn free_points(env: &Environment, count: usize, rng: &mut Rng) -> Vec<Configuration> {
    (0..count).map(|_| sample_free(env, rng).unwrap()).collect()
}

fn random_world(rng: &mut Rng) -> Environment {
    let obstacles = (0..6)
        .map(|_| {
            let (x, y) = (rng.uniform(1.0, 8.0), rng.uniform(1.0, 8.0));
            Obstacle::rect((x, y), (x + rng.uniform(0.3, 1.5), y + rng.uniform(0.3, 1.5)))
        })
        .collect();
    Environment::new(
        Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(10.0, 10.0)),
        obstacles,
        Robot::rectangle(0.2, 0.1),
    )
    .unwrap()
}

#[test]
fn forest_invariants_over_ten_thousand_link_events() {
    let mut audit = ForestAudit::default();
    let mut seed = 0;
    while audit.events < 10_000 {
        seed += 1;
        let mut rng = Rng::new(seed);
        let scenario = match seed % 4 {
            0 => worlds::two_room_corridor(),
            1 => worlds::three_corridor(),
            2 => worlds::sealed_chambers(),
            _ => worlds::Scenario {
                name: "random".into(),
                env: random_world(&mut rng),
                start: Configuration::new(vec![0.5, 0.5, 0.0]),
                goal: Configuration::new(vec![9.5, 9.5, 0.0]),
            },
        };
        let env = &scenario.env;
        let cr = free_points(env, 30, &mut rng);
        let budget = Budget::samples(3000);
        let params = if seed % 2 == 0 {
            BuildParams::llp(env, 20, budget)
        } else {
            BuildParams::llrm(env, 20, 5, budget)
        };
        let query = (seed % 2 == 0).then_some((&scenario.start, &scenario.goal));
        audit.seen.clear();
        if let LlOutput::Path(r) = ll_build(&params, &cr, env, &mut rng, query, &mut audit).unwrap() {
            if r.is_solved() {
                validate_path(env, &r.path, &scenario.start, &scenario.goal, params.resolution).unwrap();
            }
        }
    }
    assert!(
        audit.violations.is_empty(),
        "{:?}",
        &audit.violations[..audit.violations.len().min(5)]
    );
    assert!(audit.linked > 0);
}

#[test]
fn critical_seeds_leave_the_uniform_sampler_unchanged() {
    let s = worlds::sealed_chambers();
    let cr = free_points(&s.env, 10, &mut Rng::new(5));
    let run = |n: usize| {
        let mut audit = ForestAudit::default();
        let params = BuildParams::llp(&s.env, n, Budget::samples(500));
        let r = llp_plan_observed(&params, &cr, &s, &mut audit);
        assert_eq!(r, PlanStatus::SampleCapReached);
        audit.samples
    };
    let without = run(0);
    let with = run(10);
    assert_eq!(without.len(), 500);
    assert!(without.iter().zip(&with).all(|(a, b)| a.same_bits(b)));
    // Support is the whole space: samples reach every corner region.
    let corners = [(0.0, 0.0), (10.0, 0.0), (0.0, 10.0), (10.0, 10.0)];
    for c in corners {
        assert!(without
            .iter()
            .any(|q| (q[0] - c.0).abs() < 2.0 && (q[1] - c.1).abs() < 2.0));
    }
}

fn llp_plan_observed(
    params: &BuildParams,
    cr: &[Configuration],
    s: &worlds::Scenario,
    obs: &mut ForestAudit,
) -> PlanStatus {
    match ll_build(params, cr, &s.env, &mut Rng::new(77), Some((&s.start, &s.goal)), obs).unwrap() {
        LlOutput::Path(r) => r.status,
        LlOutput::Roadmap(..) => unreachable!(),
    }
}

#[test]
fn empty_critical_set_still_solves_open_world() {
    let s = worlds::open_world();
    let params = BuildParams::llp(&s.env, 0, Budget::samples(20_000));
    for seed in 0..20 {
        let r = llp_plan(&params, &[], &s.env, &s.start, &s.goal, &mut Rng::new(seed)).unwrap();
        assert!(r.is_solved());
        validate_path(&s.env, &r.path, &s.start, &s.goal, params.resolution).unwrap();
    }
}

#[test]
fn same_seed_same_path() {
    let s = worlds::two_room_corridor();
    let cr = free_points(&s.env, 40, &mut Rng::new(3));
    let params = BuildParams::llp(&s.env, 40, Budget::samples(50_000));
    let a = llp_plan(&params, &cr, &s.env, &s.start, &s.goal, &mut Rng::new(9)).unwrap();
    let b = llp_plan(&params, &cr, &s.env, &s.start, &s.goal, &mut Rng::new(9)).unwrap();
    assert_eq!(a.status, b.status);
    assert_eq!(a.stats.samples, b.stats.samples);
    assert!(a.path.iter().zip(&b.path).all(|(x, y)| x.same_bits(y)));
    assert_eq!(a.path.len(), b.path.len());
}

fn median(mut v: Vec<u64>) -> u64 {
    v.sort_unstable();
    v[v.len() / 2]
}

#[test]
fn corridor_seed_reduces_samples() {
    let s = worlds::two_room_corridor();
    let mid = 5.0 + worlds::CORRIDOR_LENGTH / 2.0;
    let cr = vec![Configuration::new(vec![mid, 5.0])];
    let budget = Budget::samples(200_000);
    let trial = |n: usize, seed: u64| {
        let params = BuildParams::llp(&s.env, n, budget);
        let r = llp_plan(&params, &cr, &s.env, &s.start, &s.goal, &mut Rng::new(seed)).unwrap();
        r.is_solved().then_some(r.stats.samples)
    };
    let with: Vec<u64> = (0..50).filter_map(|i| trial(1, i)).collect();
    let without: Vec<u64> = (0..50).filter_map(|i| trial(0, i)).collect();
    assert!(
        with.len() >= 45 && without.len() >= 25,
        "{} {}",
        with.len(),
        without.len()
    );
    assert!(
        median(with.clone()) < median(without.clone()),
        "{} vs {}",
        median(with),
        median(without)
    );
}

#[test]
fn roadmap_persists_across_queries() {
    let s = worlds::two_room_corridor();
    let mut rng = Rng::new(21);
    let cr = free_points(&s.env, 60, &mut rng);
    let params = BuildParams::llrm(&s.env, 60, 6, Budget::samples(100_000));
    let (mut rm, report) = llrm_build(&params, &cr, &s.env, &mut rng).unwrap();
    assert_eq!(report.status, PlanStatus::Solved);
    assert_eq!(rm.live_count(), 1);
    let mut size = rm.vertex_total();
    for _ in 0..5 {
        let (a, b) = (
            sample_free(&s.env, &mut rng).unwrap(),
            sample_free(&s.env, &mut rng).unwrap(),
        );
        let r = llrm_plan(&a, &b, &mut rm, &params, &s.env, &mut rng, &mut ()).unwrap();
        assert!(r.is_solved());
        validate_path(&s.env, &r.path, &a, &b, params.resolution).unwrap();
        assert_eq!(rm.live_count(), 1);
        assert!(rm.vertex_total() >= size);
        size = rm.vertex_total();
    }
    let bad = Configuration::new(vec![-1.0, 5.0]);
    let r = llrm_plan(&bad, &s.goal, &mut rm, &params, &s.env, &mut rng, &mut ()).unwrap();
    assert_eq!(r.status, PlanStatus::InvalidQuery);
    assert_eq!(rm.vertex_total(), size);
}

#[test]
fn failed_query_leaves_roadmap_intact() {
    let s = worlds::sealed_chambers();
    let mut rng = Rng::new(2);
    let left: Vec<Configuration> = (0..200)
        .map(|_| sample_free(&s.env, &mut rng).unwrap())
        .filter(|q| q[0] < 4.0)
        .take(10)
        .collect();
    let params = BuildParams::llrm(&s.env, 10, 0, Budget::samples(20_000));
    let (mut rm, _) = llrm_build(&params, &left, &s.env, &mut rng).unwrap();
    let before = rm.live_count();
    let query = BuildParams {
        budget: Budget::samples(300),
        ..params
    };
    let r = llrm_plan(&s.start, &s.goal, &mut rm, &query, &s.env, &mut rng, &mut ()).unwrap();
    assert_eq!(r.status, PlanStatus::SampleCapReached);
    assert!(r.path.is_empty());
    assert!(rm.live_count() <= before + 1);
}

#[test]
fn rrt_connect_has_a_transition_regime_in_the_corridor() {
    let s = worlds::two_room_corridor();
    let params = RrtParams::new(&s.env, Budget::samples(3_000));
    let solved = (0..100)
        .filter(|&i| {
            let r = rrt_connect(&s.env, &s.start, &s.goal, &params, &mut Rng::new(i)).unwrap();
            if r.is_solved() {
                validate_path(&s.env, &r.path, &s.start, &s.goal, params.resolution).unwrap();
            }
            r.is_solved()
        })
        .count();
    assert!(solved > 0 && solved < 100, "{solved}/100");
}
