//! Fixtures shared by the criterion benches.

use llplan::criticality::{sample_free, CriticalMask, GridSpec};
use llplan::worlds::{self, Scenario};
use llplan::{Configuration, Rng};

/// Two-room world with a hand-drawn mask over the corridor centerline.
pub fn corridor_fixture() -> (Scenario, CriticalMask) {
    let s = worlds::two_room_corridor();
    let spec = GridSpec::new(224, 224, *s.env.workspace()).expect("grid");
    let cells: Vec<usize> = (0..spec.cell_count())
        .filter(|&c| {
            let r = spec.cell_rect(c);
            let p = spec.cell_center(c);
            p.x > 5.0 && p.x < 5.0 + worlds::CORRIDOR_LENGTH && r.min.y <= 5.0 && 5.0 < r.max.y
        })
        .collect();
    let mask = CriticalMask::from_cells(spec, &cells);
    (s, mask)
}

/// Deterministic collision-free configurations.
pub fn free_configs(s: &Scenario, count: usize, seed: u64) -> Vec<Configuration> {
    let mut rng = Rng::new(seed);
    (0..count)
        .map(|_| sample_free(&s.env, &mut rng).expect("free space"))
        .collect()
}

/// Random connected weighted graph as an adjacency list: a spanning path plus chords.
pub fn random_graph(n: usize, chords: usize, seed: u64) -> Vec<Vec<(usize, f64)>> {
    let mut rng = Rng::new(seed);
    let mut adj = vec![Vec::new(); n];
    let mut add = |a: usize, b: usize, w: f64| {
        adj[a].push((b, w));
        adj[b].push((a, w));
    };
    for i in 1..n {
        add(i - 1, i, rng.uniform(0.1, 1.0));
    }
    for _ in 0..chords {
        let (a, b) = (rng.index(n), rng.index(n));
        if a != b {
            add(a, b, rng.uniform(0.1, 3.0));
        }
    }
    adj
}
