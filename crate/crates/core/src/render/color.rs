use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const WHITE: Rgb = Rgb(0xFF, 0xFF, 0xFF);
    pub const BLACK: Rgb = Rgb(0, 0, 0);

    pub fn hex(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02X}{:02X}{:02X}", self.0, self.1, self.2)
    }
}

impl FromStr for Rgb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("not a #RRGGBB color: {s:?}"));
        let hex = s.strip_prefix('#').filter(|h| h.len() == 6).ok_or_else(bad)?;
        let channel = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| bad());
        Ok(Rgb(channel(0)?, channel(2)?, channel(4)?))
    }
}

impl TryFrom<String> for Rgb {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Rgb> for String {
    fn from(c: Rgb) -> Self {
        c.to_string()
    }
}

/// Anchors of the continuous diverging scale: the ends and the middle of
/// ColorBrewer's 11-class RdBu scheme. Red marks anti-motifs (negative), blue
/// motifs (positive).
pub const DIVERGING_ANCHORS: [(f64, Rgb); 3] = [
    (-1.0, Rgb(0x67, 0x00, 0x1F)),
    (0.0, Rgb(0xF7, 0xF7, 0xF7)),
    (1.0, Rgb(0x05, 0x30, 0x61)),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleKind {
    Diverging,
    Grayscale,
}

/// Piecewise-linear RGB interpolation between anchors given in domain
/// coordinates. Values outside the domain clamp to the end anchors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorScale {
    pub kind: ScaleKind,
    pub domain: [f64; 2],
    pub anchors: Vec<(f64, Rgb)>,
}

impl ColorScale {
    pub fn diverging() -> Self {
        ColorScale {
            kind: ScaleKind::Diverging,
            domain: [-1.0, 1.0],
            anchors: DIVERGING_ANCHORS.to_vec(),
        }
    }

    /// White at `lo`, black at `hi`.
    pub fn grayscale(lo: f64, hi: f64) -> Self {
        ColorScale {
            kind: ScaleKind::Grayscale,
            domain: [lo, hi],
            anchors: vec![(lo, Rgb::WHITE), (hi, Rgb::BLACK)],
        }
    }

    /// Color of `value`, each channel rounded half-up.
    pub fn color_of(&self, value: f64) -> Rgb {
        let [lo, hi] = self.domain;
        let v = if value.is_nan() { lo } else { value.clamp(lo.min(hi), hi.max(lo)) };
        let first = self.anchors[0];
        if v <= first.0 {
            return first.1;
        }
        for w in self.anchors.windows(2) {
            let ((p0, c0), (p1, c1)) = (w[0], w[1]);
            if v <= p1 {
                if p1 <= p0 {
                    return c1;
                }
                let t = (v - p0) / (p1 - p0);
                let lerp = |a: u8, b: u8| {
                    let x = f64::from(a) + t * (f64::from(b) - f64::from(a));
                    (x + 0.5).floor().clamp(0.0, 255.0) as u8
                };
                return Rgb(lerp(c0.0, c1.0), lerp(c0.1, c1.1), lerp(c0.2, c1.2));
            }
        }
        self.anchors[self.anchors.len() - 1].1
    }
}

pub fn color_of(scale: &ColorScale, value: f64) -> Rgb {
    scale.color_of(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diverging_anchors_are_exact() {
        let s = ColorScale::diverging();
        assert_eq!(s.color_of(0.0).hex(), "#F7F7F7");
        assert_eq!(s.color_of(1.0).hex(), "#053061");
        assert_eq!(s.color_of(-1.0).hex(), "#67001F");
        assert_eq!(s.color_of(5.0), s.color_of(1.0));
        assert_eq!(s.color_of(-3.0), s.color_of(-1.0));
    }

    #[test]
    fn diverging_midpoints_round_half_up() {
        let s = ColorScale::diverging();
        // halfway from F7 to 05 is 126.0; from F7 to 30 is 147.5; F7 to 61 is 172.0
        assert_eq!(s.color_of(0.5), Rgb(126, 148, 172));
    }

    #[test]
    fn grayscale_endpoints() {
        let s = ColorScale::grayscale(0.0, 10.0);
        assert_eq!(s.color_of(10.0), Rgb::BLACK);
        assert_eq!(s.color_of(0.0), Rgb::WHITE);
        assert_eq!(s.color_of(5.0), Rgb(128, 128, 128));
    }

    #[test]
    fn monotone_channels() {
        let s = ColorScale::grayscale(0.0, 1.0);
        let mut last = 255u8;
        for i in 0..=100 {
            let c = s.color_of(i as f64 / 100.0);
            assert!(c.0 <= last);
            last = c.0;
        }
    }

    #[test]
    fn hex_round_trip() {
        let c: Rgb = "#0a30FF".parse().unwrap();
        assert_eq!(c, Rgb(10, 48, 255));
        assert_eq!(serde_json::to_string(&c).unwrap(), "\"#0A30FF\"");
        assert!("0A30FF".parse::<Rgb>().is_err());
    }
}
