//! Generators for test point families on the circle and the 2-sphere,
//! plus the plain-text point-set file format.
//!
//! Seeded kinds draw from ChaCha12 (`rand_chacha`), a fixed, versioned
//! algorithm, so a `(kind, seed, n)` triple reproduces bit-for-bit across
//! runs, platforms, and releases; the rng name is stamped into written
//! files. Streaming kinds are prefix-consistent: `generate(spec, n)` is a
//! prefix of `generate(spec, m)` for `n <= m`. The two whole-set kinds,
//! `lattice` ({k/n}) and `sphere_fibonacci`, are parametrized by the final
//! count and are exempt from prefix consistency by construction.
//!
//! File format: optional `#` comment lines, then a header `<tag> <N>` with
//! tag `circle` or `sphere2`, then one point per line with 17 significant
//! digits (round-trip exact), sphere points as three space-separated
//! coordinates.

use std::io::{BufRead, Write};
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::kernel::frac_mul;
use crate::manifold::SpaceTag;
use crate::points::PointSet;

/// A named point-family generator with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    /// `frac(k * alpha)` for `k = 1..=n`.
    Kronecker { alpha: f64 },
    /// Radical-inverse (van der Corput) sequence of `k = 1..=n` in `base`.
    VanDerCorput { base: u32 },
    /// I.i.d. uniform on `[0, 1)`.
    UniformRandom { seed: u64 },
    /// I.i.d. uniform with every draw repeated: `u_1, u_1, u_2, u_2, ...`.
    Duplicated { seed: u64 },
    /// I.i.d. uniform on a subinterval `[a, b)` of the circle.
    Clustered { seed: u64, a: f64, b: f64 },
    /// Equally spaced `{k/n: k = 0..n-1}`; whole-set family.
    Lattice,
    /// Golden-angle Fibonacci sphere points; whole-set family.
    SphereFibonacci,
    /// Uniform on the unit sphere via (z, azimuth) sampling.
    SphereRandom { seed: u64 },
}

impl GeneratorSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            GeneratorSpec::Kronecker { .. } => "kronecker",
            GeneratorSpec::VanDerCorput { .. } => "van_der_corput",
            GeneratorSpec::UniformRandom { .. } => "uniform_random",
            GeneratorSpec::Duplicated { .. } => "duplicated",
            GeneratorSpec::Clustered { .. } => "clustered",
            GeneratorSpec::Lattice => "lattice",
            GeneratorSpec::SphereFibonacci => "sphere_fibonacci",
            GeneratorSpec::SphereRandom { .. } => "sphere_random",
        }
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self, GeneratorSpec::SphereFibonacci | GeneratorSpec::SphereRandom { .. })
    }

    /// Whether prefixes of longer outputs reproduce shorter outputs.
    pub fn prefix_consistent(&self) -> bool {
        !matches!(self, GeneratorSpec::Lattice | GeneratorSpec::SphereFibonacci)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            GeneratorSpec::Kronecker { alpha } => {
                if !alpha.is_finite() || alpha <= 0.0 {
                    return Err(Error::InvalidGenerator(format!(
                        "kronecker alpha must be positive and finite, got {alpha}"
                    )));
                }
            }
            GeneratorSpec::VanDerCorput { base } => {
                if base < 2 {
                    return Err(Error::InvalidGenerator(format!(
                        "van der corput base must be >= 2, got {base}"
                    )));
                }
            }
            GeneratorSpec::Clustered { a, b, .. } => {
                if !a.is_finite() || !b.is_finite() || !(0.0 <= a && a < b && b <= 1.0) {
                    return Err(Error::InvalidGenerator(format!(
                        "cluster interval [{a}, {b}) must satisfy 0 <= a < b <= 1"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// A generated family: circle values or sphere unit vectors.
#[derive(Clone, Debug)]
pub enum GeneratedSet {
    Circle(PointSet),
    Sphere(Vec<[f64; 3]>),
}

impl GeneratedSet {
    pub fn len(&self) -> usize {
        match self {
            GeneratedSet::Circle(p) => p.len(),
            GeneratedSet::Sphere(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn space_tag(&self) -> SpaceTag {
        match self {
            GeneratedSet::Circle(_) => SpaceTag::Circle,
            GeneratedSet::Sphere(_) => SpaceTag::Sphere2,
        }
    }
}

fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let bf = base as f64;
    let mut scale = 1.0 / bf;
    let mut x = 0.0;
    while k > 0 {
        x += (k % base) as f64 * scale;
        k /= base;
        scale /= bf;
    }
    if x >= 1.0 {
        x = 1.0 - f64::EPSILON / 2.0;
    }
    x
}

fn circle_values(spec: &GeneratorSpec, n: usize) -> Result<Vec<f64>> {
    Ok(match *spec {
        GeneratorSpec::Kronecker { alpha } => {
            (1..=n).map(|k| frac_mul(k as f64, alpha)).collect()
        }
        GeneratorSpec::VanDerCorput { base } => {
            (1..=n as u64).map(|k| radical_inverse(k, base as u64)).collect()
        }
        GeneratorSpec::UniformRandom { seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            (0..n).map(|_| rng.gen::<f64>()).collect()
        }
        GeneratorSpec::Duplicated { seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut vals = Vec::with_capacity(n);
            for i in 0..n {
                if i % 2 == 0 {
                    vals.push(rng.gen::<f64>());
                } else {
                    vals.push(vals[i - 1]);
                }
            }
            vals
        }
        GeneratorSpec::Clustered { seed, a, b } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    let v = a + (b - a) * rng.gen::<f64>();
                    if v >= 1.0 {
                        1.0 - f64::EPSILON / 2.0
                    } else {
                        v
                    }
                })
                .collect()
        }
        GeneratorSpec::Lattice => {
            let nf = n as f64;
            (0..n).map(|k| k as f64 / nf).collect()
        }
        _ => unreachable!("sphere kinds handled by caller"),
    })
}

fn sphere_values(spec: &GeneratorSpec, n: usize) -> Vec<[f64; 3]> {
    match *spec {
        GeneratorSpec::SphereFibonacci => {
            // Golden-angle construction: latitudes at midpoint heights,
            // azimuths rotating by the golden angle.
            let inv_phi = 2.0 / (1.0 + 5f64.sqrt());
            (0..n)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / n as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let az = std::f64::consts::TAU * frac_mul(k as f64, inv_phi);
                    [r * az.cos(), r * az.sin(), z]
                })
                .collect()
        }
        GeneratorSpec::SphereRandom { seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    let z = 2.0 * rng.gen::<f64>() - 1.0;
                    let az = std::f64::consts::TAU * rng.gen::<f64>();
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    [r * az.cos(), r * az.sin(), z]
                })
                .collect()
        }
        _ => unreachable!("circle kinds handled by caller"),
    }
}

/// Generate `n` points from the family, reproducibly.
pub fn generate(spec: &GeneratorSpec, n: usize) -> Result<GeneratedSet> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::EmptyPointSet);
    }
    if spec.is_sphere() {
        Ok(GeneratedSet::Sphere(sphere_values(spec, n)))
    } else {
        Ok(GeneratedSet::Circle(PointSet::new(circle_values(spec, n)?)?))
    }
}

/// Generate a circle family, rejecting sphere kinds.
pub fn generate_circle(spec: &GeneratorSpec, n: usize) -> Result<PointSet> {
    match generate(spec, n)? {
        GeneratedSet::Circle(p) => Ok(p),
        GeneratedSet::Sphere(_) => Err(Error::InvalidGenerator(format!(
            "{} generates sphere points, not circle points",
            spec.tag()
        ))),
    }
}

/// Write a point set in the plain-text format.
pub fn write_points<W: Write>(mut w: W, set: &GeneratedSet) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    writeln!(w, "# points v1 rng=chacha12").map_err(io)?;
    writeln!(w, "{} {}", set.space_tag(), set.len()).map_err(io)?;
    match set {
        GeneratedSet::Circle(p) => {
            for &x in p.as_slice() {
                writeln!(w, "{x:.16e}").map_err(io)?;
            }
        }
        GeneratedSet::Sphere(v) => {
            for p in v {
                writeln!(w, "{:.16e} {:.16e} {:.16e}", p[0], p[1], p[2]).map_err(io)?;
            }
        }
    }
    Ok(())
}

/// Read a point set in the plain-text format.
pub fn read_points<R: BufRead>(r: R) -> Result<GeneratedSet> {
    let mut lines = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| Error::Io(e.to_string()))?;
        let trimmed = line.trim().to_string();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        lines.push(trimmed);
    }
    let header = lines.first().ok_or_else(|| Error::MalformedFile("missing header".into()))?;
    let mut parts = header.split_whitespace();
    let tag = parts.next().unwrap_or_default();
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::MalformedFile(format!("bad header line: {header:?}")))?;
    if parts.next().is_some() {
        return Err(Error::MalformedFile(format!("bad header line: {header:?}")));
    }
    let body = &lines[1..];
    if body.len() != n {
        return Err(Error::MalformedFile(format!(
            "header says {n} points, file has {}",
            body.len()
        )));
    }
    let parse = |s: &str| -> Result<f64> {
        s.parse::<f64>().map_err(|_| Error::MalformedFile(format!("bad number: {s:?}")))
    };
    match tag {
        "circle" => {
            let mut vals = Vec::with_capacity(n);
            for line in body {
                vals.push(parse(line)?);
            }
            Ok(GeneratedSet::Circle(PointSet::new(vals)?))
        }
        "sphere2" => {
            let mut vals = Vec::with_capacity(n);
            for line in body {
                let nums: Vec<&str> = line.split_whitespace().collect();
                if nums.len() != 3 {
                    return Err(Error::MalformedFile(format!(
                        "sphere point needs 3 coordinates: {line:?}"
                    )));
                }
                let p = [parse(nums[0])?, parse(nums[1])?, parse(nums[2])?];
                let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
                    return Err(Error::NotUnitVector { norm });
                }
                vals.push(p);
            }
            Ok(GeneratedSet::Sphere(vals))
        }
        other => Err(Error::MalformedFile(format!("unknown space tag: {other:?}"))),
    }
}

/// Write a point set to a file path.
pub fn write_points_file<P: AsRef<Path>>(path: P, set: &GeneratedSet) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::Io(e.to_string()))?;
    let mut w = std::io::BufWriter::new(f);
    write_points(&mut w, set)?;
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Read a point set from a file path.
pub fn read_points_file<P: AsRef<Path>>(path: P) -> Result<GeneratedSet> {
    let f = std::fs::File::open(path).map_err(|e| Error::Io(e.to_string()))?;
    read_points(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_small() {
        let p = generate_circle(&GeneratorSpec::Lattice, 4).unwrap();
        assert_eq!(p.as_slice(), &[0.0, 0.25, 0.5, 0.75]);
    }

    #[test]
    fn kronecker_golden_ratio_first_three() {
        let alpha = (5f64.sqrt() - 1.0) / 2.0;
        let p = generate_circle(&GeneratorSpec::Kronecker { alpha }, 3).unwrap();
        let expect = [alpha, 2.0 * alpha - 1.0, 3.0 * alpha - 1.0];
        for (got, want) in p.as_slice().iter().zip(expect) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn van_der_corput_base_two() {
        let p = generate_circle(&GeneratorSpec::VanDerCorput { base: 2 }, 7).unwrap();
        assert_eq!(p.as_slice(), &[0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875]);
    }

    #[test]
    fn duplicated_pairs_up_exactly() {
        let p = generate_circle(&GeneratorSpec::Duplicated { seed: 7 }, 9).unwrap();
        let v = p.as_slice();
        for i in (0..8).step_by(2) {
            assert_eq!(v[i], v[i + 1]);
        }
        let mut distinct: Vec<f64> = v.to_vec();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        distinct.dedup();
        assert_eq!(distinct.len(), 5);
    }

    #[test]
    fn clustered_stays_in_interval() {
        let spec = GeneratorSpec::Clustered { seed: 3, a: 0.2, b: 0.3 };
        let p = generate_circle(&spec, 500).unwrap();
        assert!(p.as_slice().iter().all(|&x| (0.2..0.3).contains(&x)));
        assert!(generate(&GeneratorSpec::Clustered { seed: 3, a: 0.5, b: 0.4 }, 4).is_err());
        assert!(generate(&GeneratorSpec::Clustered { seed: 3, a: -0.1, b: 0.4 }, 4).is_err());
    }

    #[test]
    fn prefix_consistency_for_streaming_kinds() {
        let specs = [
            GeneratorSpec::Kronecker { alpha: (5f64.sqrt() - 1.0) / 2.0 },
            GeneratorSpec::VanDerCorput { base: 3 },
            GeneratorSpec::UniformRandom { seed: 11 },
            GeneratorSpec::Duplicated { seed: 11 },
            GeneratorSpec::Clustered { seed: 11, a: 0.1, b: 0.9 },
        ];
        for spec in &specs {
            assert!(spec.prefix_consistent());
            let short = generate_circle(spec, 33).unwrap();
            let long = generate_circle(spec, 100).unwrap();
            assert_eq!(short.as_slice(), &long.as_slice()[..33], "{}", spec.tag());
        }
        let s_short = match generate(&GeneratorSpec::SphereRandom { seed: 5 }, 20).unwrap() {
            GeneratedSet::Sphere(v) => v,
            _ => unreachable!(),
        };
        let s_long = match generate(&GeneratorSpec::SphereRandom { seed: 5 }, 50).unwrap() {
            GeneratedSet::Sphere(v) => v,
            _ => unreachable!(),
        };
        assert_eq!(&s_short[..], &s_long[..20]);
        assert!(!GeneratorSpec::Lattice.prefix_consistent());
        assert!(!GeneratorSpec::SphereFibonacci.prefix_consistent());
    }

    #[test]
    fn sphere_points_are_unit_vectors() {
        for spec in [GeneratorSpec::SphereFibonacci, GeneratorSpec::SphereRandom { seed: 2 }] {
            let v = match generate(&spec, 300).unwrap() {
                GeneratedSet::Sphere(v) => v,
                _ => unreachable!(),
            };
            for p in &v {
                let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                assert!((norm - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn seeded_kinds_reproduce() {
        let a = generate_circle(&GeneratorSpec::UniformRandom { seed: 42 }, 64).unwrap();
        let b = generate_circle(&GeneratorSpec::UniformRandom { seed: 42 }, 64).unwrap();
        assert_eq!(a.as_slice(), b.as_slice());
        let c = generate_circle(&GeneratorSpec::UniformRandom { seed: 43 }, 64).unwrap();
        assert_ne!(a.as_slice(), c.as_slice());
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(generate(&GeneratorSpec::VanDerCorput { base: 1 }, 4).is_err());
        assert!(generate(&GeneratorSpec::Kronecker { alpha: f64::NAN }, 4).is_err());
        assert!(generate(&GeneratorSpec::Lattice, 0).is_err());
        assert!(generate_circle(&GeneratorSpec::SphereFibonacci, 4).is_err());
    }

    #[test]
    fn file_roundtrip_is_bit_exact() {
        let circ = generate(&GeneratorSpec::UniformRandom { seed: 9 }, 37).unwrap();
        let mut buf = Vec::new();
        write_points(&mut buf, &circ).unwrap();
        let back = read_points(buf.as_slice()).unwrap();
        match (&circ, &back) {
            (GeneratedSet::Circle(a), GeneratedSet::Circle(b)) => {
                assert_eq!(a.as_slice(), b.as_slice())
            }
            _ => panic!("tag changed in roundtrip"),
        }

        let sph = generate(&GeneratorSpec::SphereRandom { seed: 8 }, 21).unwrap();
        let mut buf = Vec::new();
        write_points(&mut buf, &sph).unwrap();
        match (sph, read_points(buf.as_slice()).unwrap()) {
            (GeneratedSet::Sphere(a), GeneratedSet::Sphere(b)) => assert_eq!(a, b),
            _ => panic!("tag changed in roundtrip"),
        }
    }

    #[test]
    fn reader_rejects_malformed_input() {
        assert!(matches!(read_points("".as_bytes()), Err(Error::MalformedFile(_))));
        assert!(matches!(read_points("circle x\n".as_bytes()), Err(Error::MalformedFile(_))));
        assert!(matches!(
            read_points("circle 2\n0.5\n".as_bytes()),
            Err(Error::MalformedFile(_))
        ));
        assert!(matches!(
            read_points("circle 1\nnot-a-number\n".as_bytes()),
            Err(Error::MalformedFile(_))
        ));
        assert!(matches!(
            read_points("klein 1\n0.5\n".as_bytes()),
            Err(Error::MalformedFile(_))
        ));
        assert!(matches!(
            read_points("sphere2 1\n1.0 0.0\n".as_bytes()),
            Err(Error::MalformedFile(_))
        ));
        assert!(matches!(
            read_points("sphere2 1\n2.0 0.0 0.0\n".as_bytes()),
            Err(Error::NotUnitVector { .. })
        ));
        // Circle coordinate outside [0, 1) propagates the domain error.
        assert!(read_points("circle 1\n1.5\n".as_bytes()).is_err());
    }
}
