//! Binary ball snapshots.
//!
//! Layout, all integers little-endian:
//! `b"MLBALL1\n"`, u32 text length, presentation text, u32 radius,
//! u32 letters, u64 vertex count, then per vertex `parent: u32`,
//! `via: u16`, `dist0: u32`, then the adjacency table as `u32`s.

use std::io::{self, Read, Write};

use crate::presentation::parse_presentation;
use crate::words::Letter;

use super::ball::{CayleyBall, NONE};

pub const MAGIC: &[u8; 8] = b"MLBALL1\n";

pub fn write_ball<W: Write>(ball: &CayleyBall, mut out: W) -> io::Result<()> {
    out.write_all(MAGIC)?;
    let text = ball.presentation.to_text();
    out.write_all(&(text.len() as u32).to_le_bytes())?;
    out.write_all(text.as_bytes())?;
    out.write_all(&(ball.radius as u32).to_le_bytes())?;
    out.write_all(&(ball.letters as u32).to_le_bytes())?;
    out.write_all(&(ball.len() as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(ball.len() * (10 + 4 * ball.letters));
    for v in 0..ball.len() {
        buf.extend_from_slice(&ball.parent[v].to_le_bytes());
        buf.extend_from_slice(&ball.via[v].0.to_le_bytes());
        buf.extend_from_slice(&ball.dist0[v].to_le_bytes());
    }
    for &t in &ball.adj {
        buf.extend_from_slice(&t.to_le_bytes());
    }
    out.write_all(&buf)
}

fn bad(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_string())
}

struct Cursor<'a>(&'a [u8]);

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> io::Result<&[u8]> {
        if self.0.len() < n {
            return Err(bad("truncated snapshot"));
        }
        let (a, b) = self.0.split_at(n);
        self.0 = b;
        Ok(a)
    }

    fn u16(&mut self) -> io::Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    fn u32(&mut self) -> io::Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> io::Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn read_ball<R: Read>(mut input: R) -> io::Result<CayleyBall> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut c = Cursor(&bytes);
    if c.take(8)? != MAGIC {
        return Err(bad("not a ball snapshot"));
    }
    let tlen = c.u32()? as usize;
    let text = std::str::from_utf8(c.take(tlen)?).map_err(|_| bad("presentation is not UTF-8"))?;
    let presentation = parse_presentation(text).map_err(|e| bad(&e.to_string()))?;
    let radius = c.u32()? as usize;
    let letters = c.u32()? as usize;
    if letters != presentation.alphabet().size() {
        return Err(bad("letter count does not match presentation"));
    }
    let n = c.u64()? as usize;
    let (mut parent, mut via, mut dist0) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        parent.push(c.u32()?);
        via.push(Letter(c.u16()?));
        dist0.push(c.u32()?);
    }
    let mut adj = Vec::with_capacity(n * letters);
    for _ in 0..n * letters {
        let t = c.u32()?;
        if t != NONE && t as usize >= n {
            return Err(bad("edge target out of range"));
        }
        adj.push(t);
    }
    if !c.0.is_empty() {
        return Err(bad("trailing bytes"));
    }
    let mut layer_start = vec![0usize];
    for d in 0..=radius {
        let end = dist0.iter().position(|&x| x as usize > d).unwrap_or(n);
        layer_start.push(end);
    }
    Ok(CayleyBall { presentation, radius, letters, dist0, parent, via, adj, layer_start })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_ball, BallOptions, SmallCancellationGroup};
    use crate::presentation::Presentation;

    #[test]
    fn round_trip_is_byte_identical() {
        let g = SmallCancellationGroup::new(Presentation::from_strs(4, &["abABcdCD"])).unwrap();
        let ball = build_ball(&g, 3, &BallOptions::default()).unwrap();
        let mut a = Vec::new();
        write_ball(&ball, &mut a).unwrap();
        let back = read_ball(&a[..]).unwrap();
        assert_eq!(back, ball);
        let mut b = Vec::new();
        write_ball(&back, &mut b).unwrap();
        assert_eq!(a, b);
        assert!(read_ball(&a[..a.len() - 1]).is_err());
    }
}
