use std::fmt;

use crate::error::{Error, Result};

/// A bijection on `{0, .., degree - 1}`.
///
/// Products compose left to right: `a * b` applies `a` first, then `b`, so
/// conjugation `x^g` is `g⁻¹ * x * g`. Ordering is lexicographic on the image
/// sequence, which puts the identity first among permutations of one degree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on {n} points"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based cycles, e.g. `[[1, 2, 3], [4, 5]]`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt == 0 || pt > degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {pt} out of range 1..={degree}"
                    )));
                }
                if touched[pt - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {pt} appears twice"
                    )));
                }
                touched[pt - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[pt - 1] = (next - 1) as u32;
            }
        }
        Permutation::from_images(images)
    }

    /// Parses cycle notation with 1-based points: `"(1 2 3)(4 5)"`, `"()"`.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut chars = text.char_indices().peekable();
        while let Some((pos, c)) = chars.next() {
            let column = pos + 1;
            match c {
                '(' => {
                    if current.is_some() {
                        return Err(cycle_err(column, "nested `(`"));
                    }
                    current = Some(Vec::new());
                }
                ')' => match current.take() {
                    Some(cycle) => {
                        if cycle.len() == 1 {
                            return Err(cycle_err(column, "1-cycles are not allowed"));
                        }
                        if !cycle.is_empty() {
                            cycles.push(cycle);
                        }
                    }
                    None => return Err(cycle_err(column, "unmatched `)`")),
                },
                c if c.is_whitespace() || c == ',' => {}
                c if c.is_ascii_digit() => {
                    let Some(cycle) = current.as_mut() else {
                        return Err(cycle_err(column, "point outside a cycle"));
                    };
                    let mut value = c.to_digit(10).unwrap() as usize;
                    while let Some(&(_, d)) = chars.peek() {
                        let Some(digit) = d.to_digit(10) else { break };
                        value = value * 10 + digit as usize;
                        chars.next();
                    }
                    if value == 0 || value > degree {
                        return Err(cycle_err(
                            column,
                            &format!("point {value} out of range 1..={degree}"),
                        ));
                    }
                    cycle.push(value);
                }
                other => return Err(cycle_err(column, &format!("unexpected `{other}`"))),
            }
        }
        if current.is_some() {
            return Err(cycle_err(text.len() + 1, "unterminated cycle"));
        }
        Permutation::from_cycles(degree, &cycles).map_err(|e| cycle_err(1, &e.to_string()))
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Permutation { images }
    }

    /// `g⁻¹ self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().compose(self).compose(g)
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut order = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }

    pub fn first_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &j)| *i as u32 != j)
            .map(|(i, _)| i as u32)
    }

    /// Disjoint cycles of length at least two, 0-based.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i as u32);
                i = self.images[i] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl std::ops::Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, pt) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", pt + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn cycle_err(column: usize, message: &str) -> Error {
    Error::CycleParse {
        column,
        message: message.to_string(),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
