use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use radhj::{theta_from_max, EpsilonPolicy, RadialGrid, SolverOptions, SteadyState, TimeStepping};
use radhj_bench::{parabolic_solver, semilinear};

fn steady_sampling(c: &mut Criterion) {
    let w = SteadyState::new(semilinear(), 0.3).unwrap();
    let mut group = c.benchmark_group("steady_sample");
    for n in [128usize, 512] {
        let nodes = RadialGrid::new(n).unwrap().nodes();
        group.bench_with_input(BenchmarkId::from_parameter(n), &nodes, |b, nodes| {
            b.iter(|| w.sample(black_box(nodes)).unwrap())
        });
    }
    group.finish();
}

fn inversion(c: &mut Criterion) {
    let pp = semilinear();
    let m = SteadyState::new(pp, 0.45).unwrap().max_value().unwrap();
    c.bench_function("theta_from_max", |b| {
        b.iter(|| theta_from_max(black_box(m), &pp, 1e-10).unwrap())
    });
}

fn solver_steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("solver_step");
    for n in [128usize, 512] {
        let (implicit, u0) = parabolic_solver(n, SolverOptions::default());
        group.bench_with_input(BenchmarkId::new("implicit", n), &u0, |b, u0| {
            b.iter(|| implicit.step(black_box(u0), 1e-3).unwrap())
        });
        let opts = SolverOptions {
            stepping: TimeStepping::Explicit { cfl: 0.9 },
            ..SolverOptions::default()
        };
        let grid = u0.grid();
        let explicit =
            radhj::RadialSolver::with_policy(grid, semilinear(), EpsilonPolicy::Fixed(1e-2), opts).unwrap();
        let dt = explicit.stable_dt(&u0);
        group.bench_with_input(BenchmarkId::new("explicit", n), &u0, |b, u0| {
            b.iter(|| explicit.step(black_box(u0), dt).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, steady_sampling, inversion, solver_steps);
criterion_main!(benches);
