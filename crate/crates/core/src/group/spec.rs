//! The group-spec mini-language and the concrete constructors behind it.
//!
//! ```text
//! spec   := factor ('x' factor)*
//! factor := 'C' n | 'D' n | 'S' n | 'Q8' | 'perm:' '[' perm (',' perm)* ']' | '(' spec ')'
//! perm   := cycle cycle*          (disjoint cycles, `()` is the identity)
//! cycle  := '(' [point (',' point)*] ')'
//! ```
//!
//! Element enumeration is frozen per constructor:
//!
//! * `C<n>`: `g^0, g^1, …, g^(n-1)`.
//! * `D<n>` (order `2n`): `r^0, …, r^(n-1)` then `r^0 s, …, r^(n-1) s`.
//! * `S<n>`: permutations of `1..n` in lexicographic order of their image
//!   tuples.
//! * `Q8`: `1, -1, i, -i, j, -j, k, -k`.
//! * `AxB`: pairs `(a, b)` in lexicographic order, index `a·|B| + b`.
//!   Products associate to the left.
//! * `perm:[…]`: breadth-first closure from the identity, multiplying on the
//!   right by the generators sorted by image tuple.
//!
//! Permutations compose left to right: `p·q` applies `p` first.

use std::collections::{HashMap, VecDeque};

use super::{FiniteGroup, GroupError, MAX_ORDER};

const MAX_SYMMETRIC: usize = 5;
const MAX_PERM_POINTS: usize = 16;

pub fn construct_group(spec: &str) -> Result<FiniteGroup, GroupError> {
    let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let mut parser = Parser {
        src: &compact,
        pos: 0,
    };
    let g = parser.product()?;
    if parser.pos != compact.len() {
        return Err(parser.malformed("trailing input"));
    }
    Ok(g.with_spec(compact.clone()))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn malformed(&self, reason: &str) -> GroupError {
        GroupError::MalformedSpec {
            spec: self.src.to_string(),
            reason: format!("{reason} at offset {}", self.pos),
        }
    }

    fn out_of_range(&self, reason: String) -> GroupError {
        GroupError::OutOfRange {
            spec: self.src.to_string(),
            reason,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), GroupError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.malformed(&format!("expected '{c}'")))
        }
    }

    fn number(&mut self) -> Result<usize, GroupError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.malformed("expected a number"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.malformed("number too large"))
    }

    fn product(&mut self) -> Result<FiniteGroup, GroupError> {
        let mut g = self.factor()?;
        while self.eat('x') {
            let h = self.factor()?;
            if g.order() * h.order() > MAX_ORDER {
                return Err(self.out_of_range(format!(
                    "product order {} exceeds {MAX_ORDER}",
                    g.order() * h.order()
                )));
            }
            g = direct_product(&g, &h);
        }
        Ok(g)
    }

    fn factor(&mut self) -> Result<FiniteGroup, GroupError> {
        if self.src[self.pos..].starts_with("perm:") {
            self.pos += 5;
            return self.perm_group();
        }
        if self.src[self.pos..].starts_with("Q8") {
            self.pos += 2;
            return Ok(quaternion());
        }
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let g = self.product()?;
                self.expect(')')?;
                Ok(g)
            }
            Some('C') => {
                self.pos += 1;
                let n = self.number()?;
                if n == 0 || n > MAX_ORDER {
                    return Err(self.out_of_range(format!("C{n}: need 1 <= n <= {MAX_ORDER}")));
                }
                Ok(cyclic(n))
            }
            Some('D') => {
                self.pos += 1;
                let n = self.number()?;
                if n == 0 || 2 * n > MAX_ORDER {
                    return Err(
                        self.out_of_range(format!("D{n}: need 1 <= n <= {}", MAX_ORDER / 2))
                    );
                }
                Ok(dihedral(n))
            }
            Some('S') => {
                self.pos += 1;
                let n = self.number()?;
                if n == 0 || n > MAX_SYMMETRIC {
                    return Err(self.out_of_range(format!("S{n}: need 1 <= n <= {MAX_SYMMETRIC}")));
                }
                Ok(symmetric(n))
            }
            _ => Err(self.malformed("expected C<n>, D<n>, S<n>, Q8, perm:[...] or '('")),
        }
    }

    fn perm_group(&mut self) -> Result<FiniteGroup, GroupError> {
        self.expect('[')?;
        let mut perms: Vec<Vec<Vec<usize>>> = Vec::new();
        if !self.eat(']') {
            loop {
                let mut cycles = Vec::new();
                while self.eat('(') {
                    let mut cycle = Vec::new();
                    if !self.eat(')') {
                        cycle.push(self.number()?);
                        while self.eat(',') {
                            cycle.push(self.number()?);
                        }
                        self.expect(')')?;
                    }
                    cycles.push(cycle);
                }
                if cycles.is_empty() {
                    self.expect('(')?;
                }
                perms.push(cycles);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        let points = || perms.iter().flatten().flatten().copied();
        let degree = points().max().unwrap_or(1);
        if points().any(|p| p == 0) {
            return Err(self.malformed("points are numbered from 1"));
        }
        if degree > MAX_PERM_POINTS {
            return Err(self.out_of_range(format!("{degree} points exceeds {MAX_PERM_POINTS}")));
        }
        let mut gens = Vec::with_capacity(perms.len());
        for cycles in &perms {
            let mut sorted: Vec<usize> = cycles.iter().flatten().copied().collect();
            let total = sorted.len();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != total {
                return Err(self.malformed("repeated point in a permutation"));
            }
            let mut images: Vec<usize> = (0..degree).collect();
            for cycle in cycles {
                for (i, &p) in cycle.iter().enumerate() {
                    images[p - 1] = cycle[(i + 1) % cycle.len()] - 1;
                }
            }
            gens.push(images);
        }
        gens.sort();
        gens.dedup();
        perm_closure(degree, &gens)
            .ok_or_else(|| self.out_of_range(format!("generated group exceeds order {MAX_ORDER}")))
    }
}

pub(crate) fn cyclic(n: usize) -> FiniteGroup {
    let rows = (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect();
    let names = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{i}"),
        })
        .collect();
    FiniteGroup::from_table(rows)
        .expect("cyclic table")
        .with_names(names)
}

pub(crate) fn dihedral(n: usize) -> FiniteGroup {
    // index i + n·f  ↔  r^i s^f;  s r^j = r^(-j) s
    let mul = |x: usize, y: usize| {
        let (i, f) = (x % n, x / n);
        let (j, h) = (y % n, y / n);
        let rot = if f == 0 { (i + j) % n } else { (i + n - j) % n };
        rot + n * ((f + h) % 2)
    };
    let rows = (0..2 * n)
        .map(|x| (0..2 * n).map(|y| mul(x, y)).collect())
        .collect();
    let names = (0..2 * n)
        .map(|x| {
            let r = match x % n {
                0 => String::new(),
                1 => "r".to_string(),
                i => format!("r^{i}"),
            };
            match (x / n, r.is_empty()) {
                (0, true) => "e".to_string(),
                (0, false) => r,
                (_, _) => format!("{r}s"),
            }
        })
        .collect();
    FiniteGroup::from_table(rows)
        .expect("dihedral table")
        .with_names(names)
}

pub(crate) fn quaternion() -> FiniteGroup {
    // index 2·u + sign, u ∈ {1, i, j, k}
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let mul = |x: usize, y: usize| {
        let (u, sx) = (x / 2, x % 2 == 1);
        let (v, sy) = (y / 2, y % 2 == 1);
        let (w, sw) = UNIT[u][v];
        2 * w + usize::from(sx ^ sy ^ sw)
    };
    let rows = (0..8)
        .map(|x| (0..8).map(|y| mul(x, y)).collect())
        .collect();
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table(rows)
        .expect("quaternion table")
        .with_names(names)
}

pub(crate) fn symmetric(n: usize) -> FiniteGroup {
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        perms.push(current.clone());
        if !next_permutation(&mut current) {
            break;
        }
    }
    from_permutations(n, perms)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn perm_closure(degree: usize, gens: &[Vec<usize>]) -> Option<FiniteGroup> {
    let identity: Vec<usize> = (0..degree).collect();
    let mut seen = HashMap::from([(identity.clone(), 0usize)]);
    let mut perms = vec![identity];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(&perms[x], g);
            if !seen.contains_key(&y) {
                if perms.len() == MAX_ORDER {
                    return None;
                }
                seen.insert(y.clone(), perms.len());
                queue.push_back(perms.len());
                perms.push(y);
            }
        }
    }
    Some(from_permutations(degree, perms))
}

/// `p` then `q`.
fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&x| q[x]).collect()
}

fn from_permutations(degree: usize, perms: Vec<Vec<usize>>) -> FiniteGroup {
    let index: HashMap<&[usize], usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let rows = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| index[compose(p, q).as_slice()])
                .collect()
        })
        .collect();
    let names = perms.iter().map(|p| cycle_notation(degree, p)).collect();
    FiniteGroup::from_table(rows)
        .expect("permutation table")
        .with_names(names)
}

fn cycle_notation(degree: usize, p: &[usize]) -> String {
    let mut seen = vec![false; degree];
    let mut out = String::new();
    for start in 0..degree {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x];
        }
        out.push('(');
        out.push_str(&cycle.join(","));
        out.push(')');
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

pub(crate) fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let nb = b.order();
    let n = a.order() * nb;
    let rows = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                .collect()
        })
        .collect();
    let names = (0..n)
        .map(|x| format!("({},{})", a.name(x / nb), b.name(x % nb)))
        .collect();
    FiniteGroup::from_table(rows)
        .expect("product table")
        .with_names(names)
}
