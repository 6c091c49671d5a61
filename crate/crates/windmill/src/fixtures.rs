//! Bundled instances and seeded random instance generators.

use rand::Rng;

use windmill_core::counter::Problem;
use windmill_core::holant::{brute_z, HolantInstance};
use windmill_core::rational::{frac, int, Rational};
use windmill_core::symfunc::{make_named, NamedFunction, SymmetricFunction};
use windmill_core::Result;

/// A counting problem on a small graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    /// Short identifier.
    pub name: String,
    /// Vertex count.
    pub num_vertices: usize,
    /// Edge list.
    pub edges: Vec<(usize, usize)>,
    /// Vertex family.
    pub problem: Problem,
    /// Optional edge weights.
    pub weights: Option<Vec<Rational>>,
}

impl Fixture {
    /// An unweighted fixture.
    pub fn new(name: &str, num_vertices: usize, edges: &[(usize, usize)], problem: Problem) -> Self {
        Self { name: name.into(), num_vertices, edges: edges.to_vec(), problem, weights: None }
    }

    /// The same fixture with edge weights.
    pub fn weighted(mut self, weights: Vec<Rational>) -> Self {
        self.weights = Some(weights);
        self
    }

    /// The Holant instance, transformed when weighted.
    pub fn instance(&self) -> Result<HolantInstance> {
        self.problem.instance(self.num_vertices, &self.edges, self.weights.as_deref())
    }

    /// `Z_0` by enumeration.
    pub fn exact_z0(&self) -> Result<Rational> {
        brute_z(&self.instance()?, 0)
    }

    /// Minimum vertex degree, 0 for an empty graph.
    pub fn min_degree(&self) -> usize {
        let mut d = vec![0; self.num_vertices];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d.into_iter().min().unwrap_or(0)
    }
}

/// Triangle edges.
pub const TRIANGLE: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];
/// Complete graph on four vertices.
pub const K4: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
/// Path with two edges.
pub const PATH2: [(usize, usize); 2] = [(0, 1), (1, 2)];
/// Four-cycle.
pub const C4: [(usize, usize); 4] = [(0, 1), (1, 2), (2, 3), (3, 0)];

/// The five end-to-end counting fixtures.
pub fn counting_fixtures() -> Vec<Fixture> {
    vec![
        Fixture::new("triangle-matching-b1", 3, &TRIANGLE, Problem::BMatching(1)),
        Fixture::new("k4-matching-b2", 4, &K4, Problem::BMatching(2)),
        Fixture::new("triangle-cover-b1", 3, &TRIANGLE, Problem::BEdgeCover(1)),
        Fixture::new("k4-cover-b2", 4, &K4, Problem::BEdgeCover(2)),
        Fixture::new("triangle-matching-w2", 3, &TRIANGLE, Problem::BMatching(1)).weighted(vec![int(2); 3]),
    ]
}

/// Every bundled fixture: the counting set plus a few small extras.
pub fn bundled() -> Vec<Fixture> {
    let mut all = counting_fixtures();
    all.extend([
        Fixture::new("path2-matching-b1", 3, &PATH2, Problem::BMatching(1)),
        Fixture::new("c4-matching-b1", 4, &C4, Problem::BMatching(1)),
        Fixture::new("c4-cover-b1", 4, &C4, Problem::BEdgeCover(1)),
        Fixture::new("k4-matching-b1", 4, &K4, Problem::BMatching(1)),
        Fixture::new("k4-cover-b1", 4, &K4, Problem::BEdgeCover(1)),
        Fixture::new("path2-cover-w", 3, &PATH2, Problem::BEdgeCover(1)).weighted(vec![frac(1, 3), int(2)]),
        Fixture::new("c4-matching-w", 4, &C4, Problem::BMatching(2)).weighted(vec![int(3), frac(1, 2), int(1), int(2)]),
    ]);
    all
}

/// Looks up a bundled fixture by name.
pub fn by_name(name: &str) -> Option<Fixture> {
    bundled().into_iter().find(|f| f.name == name)
}

/// A loopless multigraph with `1..=max_edges` edges on
/// `2..=max_vertices` vertices.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, max_edges: usize) -> (usize, Vec<(usize, usize)>) {
    let n = rng.random_range(2..=max_vertices.max(2));
    let m = rng.random_range(1..=max_edges.max(1));
    let edges = (0..m)
        .map(|_| {
            let u = rng.random_range(0..n);
            let v = (u + rng.random_range(1..n)) % n;
            (u, v)
        })
        .collect();
    (n, edges)
}

/// A small positive rational with numerator and denominator in `1..=4`.
pub fn random_weight<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    frac(rng.random_range(1..=4), rng.random_range(1..=4))
}

/// A random b-matching (`b <= 3`) or b-edge-cover (`b <= 2`) fixture with
/// at most `max_edges` edges, edge covers resampled until `Z_0 > 0`.
pub fn random_fixture<R: Rng + ?Sized>(rng: &mut R, max_edges: usize, weighted: bool) -> Fixture {
    loop {
        let (n, edges) = random_graph(rng, 5, max_edges);
        let problem = if rng.random::<bool>() {
            Problem::BMatching(rng.random_range(1..=3))
        } else {
            Problem::BEdgeCover(rng.random_range(1..=2))
        };
        let mut f = Fixture::new("random", n, &edges, problem);
        if let Problem::BEdgeCover(b) = problem {
            if f.min_degree() < b {
                continue;
            }
        }
        if weighted {
            f = f.weighted((0..edges.len()).map(|_| random_weight(rng)).collect());
        }
        return f;
    }
}

/// `f(2j) = a r^j`, `f(2j + 1) = b r^j` with a shared ratio `r`.
pub fn random_geometric<R: Rng + ?Sized>(rng: &mut R, arity: usize) -> SymmetricFunction {
    let r = random_weight(rng);
    let (a, b) = match rng.random_range(0..3) {
        0 => (random_weight(rng), int(0)),
        1 => (int(0), random_weight(rng)),
        _ => (random_weight(rng), random_weight(rng)),
    };
    let mut values = Vec::with_capacity(arity + 1);
    let mut scale = int(1);
    for k in 0..=arity {
        values.push(if k % 2 == 0 { &a * &scale } else { &b * &scale });
        if k % 2 == 1 {
            scale *= &r;
        }
    }
    SymmetricFunction::new(values).expect("nonnegative values")
}

/// A random instance whose vertex functions come from windable families
/// (AtMost, AtLeast with `b <= 2`, shared-ratio geometric) and which has
/// a positive-weight state with no inconsistent edge.
pub fn random_windable_instance<R: Rng + ?Sized>(rng: &mut R, max_edges: usize) -> HolantInstance {
    loop {
        let (n, edges) = random_graph(rng, 4, max_edges);
        let mut degree = vec![0; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let functions = degree
            .iter()
            .map(|&d| match rng.random_range(0..3) {
                0 => make_named(&NamedFunction::AtMost(rng.random_range(0..=3)), d),
                1 => make_named(&NamedFunction::AtLeast(rng.random_range(0..=2)), d),
                _ => Ok(random_geometric(rng, d)),
            })
            .collect::<Result<Vec<_>>>()
            .expect("valid arities");
        let inst = HolantInstance::new(functions, edges).expect("valid instance");
        if brute_z(&inst, 0).map(|z| z > int(0)).unwrap_or(false) {
            return inst;
        }
    }
}
