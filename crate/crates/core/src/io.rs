//! Dense little-endian binary formats for sampled signals and Gabor fields.
//!
//! Signal file: `"NCWV1"`, group header, then `len` complex samples as
//! `(re, im)` f64 pairs in row-major order. Group header: kind tag `u8`,
//! kind parameter `u32`, axis count `u32`, then per axis: axis type `u8`
//! (0 line, 1 circle, 2 cyclic), rule tag `u8`, `lo` f64, `hi` f64, `n` u64.
//!
//! Gabor field file: `"NCGF1"`, group header, base strides (`u32` count then
//! `u64` each), dual layout tag `u8` (0 frequency, 1 λ, 2 radius,
//! 3 frequency×character) with its coordinates, dual weights, entry dimension
//! `u64` (1 for scalars), then coefficients ordered base, dual, row, column.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gabor::GaborField;
use crate::groups::{Axis, DualLayout, GroupKind, GroupSpec};
use crate::numerics::Rule;
use crate::transforms::{FourierEntries, SampledSignal};

pub const SIGNAL_MAGIC: &[u8; 5] = b"NCWV1";
pub const FIELD_MAGIC: &[u8; 5] = b"NCGF1";

/// Per-axis descriptor as stored on disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisHeader {
    pub axis_type: u8,
    pub rule: u8,
    pub lo: f64,
    pub hi: f64,
    pub n: u64,
}

/// Group description as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupHeader {
    pub kind: GroupKind,
    pub axes: Vec<AxisHeader>,
}

impl GroupHeader {
    pub fn of(g: &GroupSpec) -> Self {
        let axes = g
            .axes()
            .iter()
            .map(|a| match a {
                Axis::Line(gr) | Axis::Circle(gr) => AxisHeader {
                    axis_type: if a.is_line() { 0 } else { 1 },
                    rule: gr.rule().tag(),
                    lo: gr.lo(),
                    hi: gr.hi(),
                    n: gr.len() as u64,
                },
                Axis::Cyclic(m) => AxisHeader {
                    axis_type: 2,
                    rule: Rule::Periodic.tag(),
                    lo: 0.0,
                    hi: *m as f64,
                    n: *m as u64,
                },
            })
            .collect();
        GroupHeader {
            kind: g.kind(),
            axes,
        }
    }

    fn cells(&self) -> Result<usize> {
        self.axes.iter().try_fold(1usize, |acc, a| {
            usize::try_from(a.n)
                .ok()
                .and_then(|n| acc.checked_mul(n))
                .ok_or_else(|| Error::Format("grid size overflows".into()))
        })
    }
}

fn put_header(out: &mut Vec<u8>, h: &GroupHeader) {
    out.push(h.kind.tag());
    out.extend_from_slice(&h.kind.param().to_le_bytes());
    out.extend_from_slice(&(h.axes.len() as u32).to_le_bytes());
    for a in &h.axes {
        out.push(a.axis_type);
        out.push(a.rule);
        out.extend_from_slice(&a.lo.to_le_bytes());
        out.extend_from_slice(&a.hi.to_le_bytes());
        out.extend_from_slice(&a.n.to_le_bytes());
    }
}

fn put_f64s(out: &mut Vec<u8>, v: &[f64]) {
    out.extend_from_slice(&(v.len() as u64).to_le_bytes());
    for x in v {
        out.extend_from_slice(&x.to_le_bytes());
    }
}

fn put_complex(out: &mut Vec<u8>, z: Complex64) {
    out.extend_from_slice(&z.re.to_le_bytes());
    out.extend_from_slice(&z.im.to_le_bytes());
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| {
                Error::Format(format!(
                    "truncated data: need {n} bytes at offset {}",
                    self.pos
                ))
            })?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(
            self.take(4)?.try_into().expect("4 bytes"),
        ))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(
            self.take(8)?.try_into().expect("8 bytes"),
        ))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(
            self.take(8)?.try_into().expect("8 bytes"),
        ))
    }

    fn len(&mut self) -> Result<usize> {
        let n = self.u64()?;
        let n = usize::try_from(n).map_err(|_| Error::Format("length overflows".into()))?;
        if n > self.buf.len() {
            return Err(Error::Format(format!("length {n} exceeds the file size")));
        }
        Ok(n)
    }

    fn f64s(&mut self) -> Result<Vec<f64>> {
        let n = self.len()?;
        (0..n).map(|_| self.f64()).collect()
    }

    fn complex(&mut self) -> Result<Complex64> {
        Ok(Complex64::new(self.f64()?, self.f64()?))
    }

    fn magic(&mut self, m: &[u8; 5]) -> Result<()> {
        let got = self
            .take(5)
            .map_err(|_| Error::Format("file too short for magic".into()))?;
        if got != m {
            return Err(Error::Format(format!(
                "bad magic {:?}, expected {:?}",
                String::from_utf8_lossy(got),
                String::from_utf8_lossy(m)
            )));
        }
        Ok(())
    }

    fn header(&mut self) -> Result<GroupHeader> {
        let tag = self.u8()?;
        let param = self.u32()?;
        let kind = GroupKind::from_tag(tag, param)
            .ok_or_else(|| Error::Format(format!("unknown group kind tag {tag}")))?;
        let count = self.u32()? as usize;
        if count > 16 {
            return Err(Error::Format(format!("implausible axis count {count}")));
        }
        let axes = (0..count)
            .map(|_| {
                Ok(AxisHeader {
                    axis_type: self.u8()?,
                    rule: self.u8()?,
                    lo: self.f64()?,
                    hi: self.f64()?,
                    n: self.u64()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupHeader { kind, axes })
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Format(format!(
                "{} trailing bytes after payload",
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}

/// Serializes a signal to the dense binary format.
pub fn encode_signal(f: &SampledSignal) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + 16 * f.values().len());
    out.extend_from_slice(SIGNAL_MAGIC);
    put_header(&mut out, &GroupHeader::of(f.group()));
    for z in f.values() {
        put_complex(&mut out, *z);
    }
    out
}

fn axes_match(a: &AxisHeader, b: &AxisHeader) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
    a.axis_type == b.axis_type
        && a.rule == b.rule
        && a.n == b.n
        && close(a.lo, b.lo)
        && close(a.hi, b.hi)
}

/// Parses a signal and checks it against the expected group grids.
pub fn decode_signal(bytes: &[u8], group: &Arc<GroupSpec>) -> Result<SampledSignal> {
    let mut r = Reader { buf: bytes, pos: 0 };
    r.magic(SIGNAL_MAGIC)?;
    let h = r.header()?;
    let want = GroupHeader::of(group);
    if h.kind != want.kind {
        return Err(Error::Format(format!(
            "file holds a {} signal, expected {}",
            h.kind, want.kind
        )));
    }
    if h.axes.len() != want.axes.len() {
        return Err(Error::Format(format!(
            "file has {} axes, group has {}",
            h.axes.len(),
            want.axes.len()
        )));
    }
    for (i, (a, b)) in h.axes.iter().zip(&want.axes).enumerate() {
        if !axes_match(a, b) {
            return Err(Error::Format(format!(
                "axis {i} grid {a:?} does not match {b:?}"
            )));
        }
    }
    let n = h.cells()?;
    let values = (0..n).map(|_| r.complex()).collect::<Result<Vec<_>>>()?;
    r.finish()?;
    SampledSignal::new(group.clone(), values).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_signal(path: impl AsRef<Path>, f: &SampledSignal) -> Result<()> {
    fs::write(path, encode_signal(f))?;
    Ok(())
}

/// Reads a signal file whose grids must match `group`.
pub fn ingest_signal(path: impl AsRef<Path>, group: &Arc<GroupSpec>) -> Result<SampledSignal> {
    let bytes = fs::read(path)?;
    decode_signal(&bytes, group)
}

/// Serializes a Gabor field.
pub fn encode_gabor_field(field: &GaborField) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(FIELD_MAGIC);
    put_header(&mut out, &GroupHeader::of(&field.group));
    out.extend_from_slice(&(field.base.strides().len() as u32).to_le_bytes());
    for s in field.base.strides() {
        out.extend_from_slice(&(*s as u64).to_le_bytes());
    }
    match field.dual.layout() {
        DualLayout::Frequency { axes } => {
            out.push(0);
            out.extend_from_slice(&(axes.len() as u32).to_le_bytes());
            for a in axes {
                put_f64s(&mut out, a);
            }
        }
        DualLayout::Lambda { lambdas } => {
            out.push(1);
            put_f64s(&mut out, lambdas);
        }
        DualLayout::Radius { radii } => {
            out.push(2);
            put_f64s(&mut out, radii);
        }
        DualLayout::FrequencyCharacter { freqs, characters } => {
            out.push(3);
            put_f64s(&mut out, freqs);
            out.extend_from_slice(&(*characters as u32).to_le_bytes());
        }
    }
    put_f64s(&mut out, field.dual.weights());
    out.extend_from_slice(&(field.entry_dim() as u64).to_le_bytes());
    for c in &field.coeffs {
        match c {
            FourierEntries::Scalar(v) => v.iter().for_each(|z| put_complex(&mut out, *z)),
            FourierEntries::Operator(v) => {
                for m in v {
                    m.matrix
                        .as_slice()
                        .iter()
                        .for_each(|z| put_complex(&mut out, *z));
                }
            }
        }
    }
    out
}

pub fn write_gabor_field(path: impl AsRef<Path>, field: &GaborField) -> Result<()> {
    fs::write(path, encode_gabor_field(field))?;
    Ok(())
}

/// Contents of a Gabor field file.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborFieldFile {
    pub group: GroupHeader,
    pub strides: Vec<usize>,
    pub dual_layout: DualLayout,
    pub dual_weights: Vec<f64>,
    pub entry_dim: usize,
    /// Base-major, then dual, then row-major entry.
    pub coeffs: Vec<Complex64>,
}

pub fn decode_gabor_field(bytes: &[u8]) -> Result<GaborFieldFile> {
    let mut r = Reader { buf: bytes, pos: 0 };
    r.magic(FIELD_MAGIC)?;
    let group = r.header()?;
    let ns = r.u32()? as usize;
    if ns != group.axes.len() {
        return Err(Error::Format("stride count differs from axis count".into()));
    }
    let strides = (0..ns)
        .map(|_| r.u64().map(|v| v as usize))
        .collect::<Result<Vec<_>>>()?;
    let dual_layout = match r.u8()? {
        0 => {
            let k = r.u32()? as usize;
            if k > 16 {
                return Err(Error::Format("implausible frequency axis count".into()));
            }
            DualLayout::Frequency {
                axes: (0..k).map(|_| r.f64s()).collect::<Result<Vec<_>>>()?,
            }
        }
        1 => DualLayout::Lambda { lambdas: r.f64s()? },
        2 => DualLayout::Radius { radii: r.f64s()? },
        3 => {
            let freqs = r.f64s()?;
            let characters = r.u32()? as usize;
            DualLayout::FrequencyCharacter { freqs, characters }
        }
        t => return Err(Error::Format(format!("unknown dual layout tag {t}"))),
    };
    let dual_weights = r.f64s()?;
    let entry_dim = r.len()?;
    let mut base = 1usize;
    for (a, s) in group.axes.iter().zip(&strides) {
        if *s == 0 {
            return Err(Error::Format("zero base stride".into()));
        }
        base = base
            .checked_mul((a.n as usize).div_ceil(*s))
            .ok_or_else(|| Error::Format("base size overflows".into()))?;
    }
    let per = entry_dim
        .checked_mul(entry_dim)
        .and_then(|e| e.checked_mul(dual_weights.len()))
        .and_then(|e| e.checked_mul(base))
        .ok_or_else(|| Error::Format("field size overflows".into()))?;
    if per.checked_mul(16).is_none_or(|b| b > bytes.len()) {
        return Err(Error::Format("truncated coefficient payload".into()));
    }
    let coeffs = (0..per).map(|_| r.complex()).collect::<Result<Vec<_>>>()?;
    r.finish()?;
    Ok(GaborFieldFile {
        group,
        strides,
        dual_layout,
        dual_weights,
        entry_dim,
        coeffs,
    })
}

pub fn read_gabor_field(path: impl AsRef<Path>) -> Result<GaborFieldFile> {
    decode_gabor_field(&fs::read(path)?)
}
