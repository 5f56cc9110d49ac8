use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use fsmlattice_core::analysis::{atlas, check_reversibility, Sweep, M44, M45, M54};
use fsmlattice_core::eca::{eca_run, preimages, Boundary, EcaRow};
use fsmlattice_core::engine::{run, run_reverse, step_in_place, BoundaryPolicy, LatticeState};
use fsmlattice_core::rng::random_lattice;
use fsmlattice_core::{Direction, EcaRule, State, Symbol};

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep");
    let m = M45.machine();
    for width in [64usize, 1024, 16384] {
        let mut cells = random_lattice(width, 1).unwrap().into_cells();
        g.throughput(Throughput::Elements(width as u64));
        g.bench_with_input(BenchmarkId::from_parameter(width), &width, |b, _| {
            let mut t = 0;
            b.iter(|| {
                let o = step_in_place(
                    black_box(&mut cells),
                    &m,
                    Symbol::Zero,
                    Direction::at(t, Direction::LeftToRight),
                );
                t += 1;
                o
            })
        });
    }
    g.finish();
}

fn trajectories(c: &mut Criterion) {
    let init = LatticeState::centered_one(129).unwrap();
    c.bench_function("forward_r90_129x128", |b| {
        b.iter(|| run(M45, black_box(&init), &BoundaryPolicy::ForwardR90, 128).unwrap())
    });

    let rows = eca_run(
        &EcaRow::single_centered(800, Boundary::Null),
        EcaRule::R90,
        400,
    );
    let start = LatticeState::new(
        rows[400]
            .cells
            .iter()
            .map(|&b| State::from_bit(b))
            .collect(),
    )
    .unwrap();
    let mut g = c.benchmark_group("reverse");
    g.sample_size(10);
    g.bench_function("m54_800x2400", |b| {
        b.iter(|| run_reverse(M54, black_box(&start), 2400).unwrap())
    });
    g.finish();
}

fn preimage_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("preimages");
    for width in [12usize, 18, 22] {
        let row = EcaRow::single_centered(width + 1, Boundary::Null);
        g.bench_with_input(BenchmarkId::from_parameter(width + 1), &row, |b, row| {
            b.iter(|| preimages(black_box(row), EcaRule::R90).unwrap())
        });
    }
    g.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("exhaustive");
    g.sample_size(10);
    g.bench_function("atlas_19x38", |b| b.iter(|| atlas(19, 38).unwrap()));
    g.bench_function("m44_reversal_10x16", |b| {
        b.iter(|| check_reversibility(M44, 10, 16, Sweep::Exhaustive).unwrap())
    });
    g.finish();
}

criterion_group!(benches, sweep, trajectories, preimage_search, sweeps);
criterion_main!(benches);
