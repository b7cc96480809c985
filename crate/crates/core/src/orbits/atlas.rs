//! The graphlet atlas: all connected graphs on 2..=5 nodes up to
//! isomorphism, their automorphism orbits, and mask-indexed lookup tables
//! for classifying enumerated subgraphs in O(1).
//!
//! Graphlets are ordered by (node count, edge count, descending degree
//! sequence, canonical adjacency); orbits within a graphlet are ordered by
//! vertex degree and then by canonical vertex index. For graphlets on up to
//! four nodes this reproduces the conventional numbering (orbit 0 the edge
//! end, orbits 1-2 the path ends/centre, orbit 3 the triangle, ... orbit 14
//! the 4-clique); the five-node block extends it deterministically. The
//! whole table is pinned by a fixture so the numbering cannot drift.

use std::sync::OnceLock;

/// Largest graphlet size handled by the atlas.
pub const MAX_GRAPHLET_SIZE: usize = 5;

/// Bit position of the vertex pair `(i, j)`, `i < j`, inside an adjacency
/// mask. The j-major layout means extending a subgraph by one vertex only
/// adds high bits, so masks can be built incrementally.
#[inline]
pub(crate) fn pair_bit(i: usize, j: usize) -> u32 {
    debug_assert!(i < j);
    (j * (j - 1) / 2 + i) as u32
}

#[inline]
fn mask_bits(node_count: usize) -> usize {
    node_count * (node_count - 1) / 2
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut items: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::new();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

fn relabel_mask(mask: u16, n: usize, perm: &[u8]) -> u16 {
    let mut out = 0u16;
    for j in 1..n {
        for i in 0..j {
            if mask & (1 << pair_bit(i, j)) != 0 {
                let (a, b) = (perm[i], perm[j]);
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                out |= 1 << pair_bit(a as usize, b as usize);
            }
        }
    }
    out
}

fn is_connected(mask: u16, n: usize) -> bool {
    let mut seen = 1u8; // vertex bitset, n <= 5
    let mut frontier = vec![0usize];
    while let Some(v) = frontier.pop() {
        for u in 0..n {
            if u == v {
                continue;
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if mask & (1 << pair_bit(a, b)) != 0 && seen & (1 << u) == 0 {
                seen |= 1 << u;
                frontier.push(u);
            }
        }
    }
    seen.count_ones() as usize == n
}

fn degrees(mask: u16, n: usize) -> Vec<usize> {
    let mut deg = vec![0usize; n];
    for j in 1..n {
        for i in 0..j {
            if mask & (1 << pair_bit(i, j)) != 0 {
                deg[i] += 1;
                deg[j] += 1;
            }
        }
    }
    deg
}

/// One canonical graphlet.
#[derive(Debug, Clone)]
pub struct Graphlet {
    /// Position in the atlas ordering (0..30).
    pub id: u8,
    pub node_count: usize,
    pub edge_count: usize,
    /// Canonical adjacency mask (minimum over all relabelings).
    pub mask: u16,
    /// Global orbit id of each canonical vertex.
    pub vertex_orbits: Vec<u8>,
}

impl Graphlet {
    /// Edges of the canonical form as `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for j in 1..self.node_count {
            for i in 0..j {
                if self.mask & (1 << pair_bit(i, j)) != 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Per-subgraph-size classification table, indexed by adjacency mask.
struct Lut {
    /// Graphlet id per mask; `DISCONNECTED` for masks that are not connected.
    graphlet: Vec<u8>,
    /// Global orbit id per (mask, vertex position).
    orbits: Vec<[u8; MAX_GRAPHLET_SIZE]>,
}

pub(crate) const DISCONNECTED: u8 = u8::MAX;

/// The full graphlet atlas. Obtain the process-wide instance with
/// [`GraphletAtlas::get`].
pub struct GraphletAtlas {
    graphlets: Vec<Graphlet>,
    luts: Vec<Lut>, // index by node count, 0..=5 (0,1 unused)
}

static ATLAS: OnceLock<GraphletAtlas> = OnceLock::new();

impl GraphletAtlas {
    pub fn get() -> &'static GraphletAtlas {
        ATLAS.get_or_init(GraphletAtlas::build)
    }

    fn build() -> GraphletAtlas {
        // Collect canonical forms of all connected graphs on 2..=5 nodes.
        let mut graphlets: Vec<Graphlet> = Vec::new();
        for n in 2..=MAX_GRAPHLET_SIZE {
            let perms = permutations(n);
            let mut canons: Vec<u16> = Vec::new();
            for mask in 0..(1u32 << mask_bits(n)) as u16 {
                if !is_connected(mask, n) {
                    continue;
                }
                let canon = perms
                    .iter()
                    .map(|p| relabel_mask(mask, n, p))
                    .min()
                    .unwrap();
                if !canons.contains(&canon) {
                    canons.push(canon);
                }
            }
            // Atlas order within one size: edge count, then descending degree
            // sequence (lexicographically), then the canonical mask.
            canons.sort_by_key(|&m| {
                let mut deg = degrees(m, n);
                deg.sort_unstable_by(|a, b| b.cmp(a));
                (m.count_ones(), deg, m)
            });
            for mask in canons {
                graphlets.push(Graphlet {
                    id: 0,
                    node_count: n,
                    edge_count: (mask.count_ones()) as usize,
                    mask,
                    vertex_orbits: Vec::new(),
                });
            }
        }

        // Assign graphlet ids and global orbit ids.
        let mut next_orbit: u8 = 0;
        for (id, g) in graphlets.iter_mut().enumerate() {
            g.id = id as u8;
            let n = g.node_count;
            let perms = permutations(n);
            // Union vertices related by an automorphism.
            let mut class: Vec<usize> = (0..n).collect();
            for p in &perms {
                if relabel_mask(g.mask, n, p) == g.mask {
                    for v in 0..n {
                        let (mut a, mut b) = (v, p[v] as usize);
                        while class[a] != a {
                            a = class[a];
                        }
                        while class[b] != b {
                            b = class[b];
                        }
                        if a != b {
                            class[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
            let root_of = |mut v: usize, class: &[usize]| {
                while class[v] != v {
                    v = class[v];
                }
                v
            };
            let deg = degrees(g.mask, n);
            let mut reps: Vec<usize> = (0..n)
                .filter(|&v| root_of(v, &class) == v)
                .collect();
            reps.sort_by_key(|&v| (deg[v], v));
            g.vertex_orbits = vec![0; n];
            for rep in reps {
                for v in 0..n {
                    if root_of(v, &class) == rep {
                        g.vertex_orbits[v] = next_orbit;
                    }
                }
                next_orbit += 1;
            }
        }

        // Classification tables: mask -> (graphlet id, per-position orbits).
        let mut luts: Vec<Lut> = Vec::new();
        for n in 0..=MAX_GRAPHLET_SIZE {
            if n < 2 {
                luts.push(Lut {
                    graphlet: Vec::new(),
                    orbits: Vec::new(),
                });
                continue;
            }
            let size = 1usize << mask_bits(n);
            let perms = permutations(n);
            let mut lut = Lut {
                graphlet: vec![DISCONNECTED; size],
                orbits: vec![[DISCONNECTED; MAX_GRAPHLET_SIZE]; size],
            };
            for mask in 0..size as u16 {
                if !is_connected(mask, n) {
                    continue;
                }
                let (canon, best) = perms
                    .iter()
                    .map(|p| (relabel_mask(mask, n, p), p))
                    .min_by_key(|&(m, _)| m)
                    .unwrap();
                let g = graphlets
                    .iter()
                    .find(|g| g.node_count == n && g.mask == canon)
                    .expect("canonical form present in atlas");
                lut.graphlet[mask as usize] = g.id;
                for v in 0..n {
                    lut.orbits[mask as usize][v] = g.vertex_orbits[best[v] as usize];
                }
            }
            luts.push(lut);
        }

        let atlas = GraphletAtlas { graphlets, luts };
        debug_assert_eq!(atlas.graphlets.len(), 30);
        debug_assert_eq!(atlas.orbit_count(MAX_GRAPHLET_SIZE), 73);
        atlas
    }

    pub fn graphlets(&self) -> &[Graphlet] {
        &self.graphlets
    }

    /// Number of graphlets on at most `max_size` nodes (9 for size 4, 30
    /// for size 5).
    pub fn graphlet_count(&self, max_size: usize) -> usize {
        self.graphlets
            .iter()
            .filter(|g| g.node_count <= max_size)
            .count()
    }

    /// Number of automorphism orbits over graphlets on at most `max_size`
    /// nodes: 1, 4, 15, 73 for sizes 2..=5.
    pub fn orbit_count(&self, max_size: usize) -> usize {
        self.graphlets
            .iter()
            .filter(|g| g.node_count <= max_size)
            .map(|g| g.vertex_orbits.iter().map(|&o| o as usize + 1).max().unwrap())
            .max()
            .unwrap_or(0)
    }

    /// Graphlet id for a size-`n` adjacency mask, or `DISCONNECTED`.
    #[inline]
    pub(crate) fn graphlet_of(&self, n: usize, mask: u16) -> u8 {
        self.luts[n].graphlet[mask as usize]
    }

    /// Per-position global orbit ids for a size-`n` adjacency mask.
    #[inline]
    pub(crate) fn orbits_of(&self, n: usize, mask: u16) -> &[u8; MAX_GRAPHLET_SIZE] {
        &self.luts[n].orbits[mask as usize]
    }

    /// Serializes the atlas as a tab-separated table of
    /// `(graphlet, nodes, canonical edges, per-vertex orbit ids)`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("#graphlet\tnodes\tedges\tvertex_orbits\n");
        for g in &self.graphlets {
            let edges = g
                .edges()
                .iter()
                .map(|&(i, j)| format!("{i}-{j}"))
                .collect::<Vec<_>>()
                .join(",");
            let orbits = g
                .vertex_orbits
                .iter()
                .map(|o| o.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!("{}\t{}\t{}\t{}\n", g.id, g.node_count, edges, orbits));
        }
        out
    }
}
