use std::fmt;
use std::str::FromStr;

/// Variable a sweep runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVar {
    Jc,
    Omega,
    Nu,
    N,
    Theta,
}

impl SweepVar {
    /// Header of the leading column in swept output.
    pub fn column(self) -> &'static str {
        match self {
            SweepVar::Jc => "jc",
            SweepVar::Omega => "omega",
            SweepVar::Nu => "nu",
            SweepVar::N => "n",
            SweepVar::Theta => "theta",
        }
    }
}

impl FromStr for SweepVar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jc" | "j_c" | "J" => Ok(SweepVar::Jc),
            "omega" => Ok(SweepVar::Omega),
            "nu" => Ok(SweepVar::Nu),
            "n" => Ok(SweepVar::N),
            "theta" => Ok(SweepVar::Theta),
            other => Err(format!("unknown sweep variable '{other}' (expected jc, omega, nu, n or theta)")),
        }
    }
}

/// `VAR:START:STOP:COUNT`, an evenly spaced grid including both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(
                |i| {
                    if i + 1 == self.count {
                        self.stop
                    } else {
                        self.start + (self.stop - self.start) * i as f64 / last
                    }
                },
            )
            .collect()
    }

    /// Grid points as photon numbers; fails unless every point is a
    /// non-negative integer.
    pub fn photon_numbers(&self) -> Result<Vec<usize>, String> {
        self.values()
            .into_iter()
            .map(|x| {
                let r = x.round();
                if (x - r).abs() > 1e-9 || r < 0.0 {
                    Err(format!("sweep over n needs non-negative integer grid points, got {x}"))
                } else {
                    Ok(r as usize)
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [var, start, stop, count] = parts[..] else {
            return Err(format!("expected VAR:START:STOP:COUNT, got '{s}'"));
        };
        let variable: SweepVar = var.parse()?;
        let number = |t: &str, what: &str| -> Result<f64, String> {
            let x: f64 = t.parse().map_err(|_| format!("sweep {what} '{t}' is not a number"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("sweep {what} must be finite"))
            }
        };
        let start = number(start, "start")?;
        let stop = number(stop, "stop")?;
        let count: usize = count.parse().map_err(|_| format!("sweep count '{count}' is not a non-negative integer"))?;
        if count < 2 {
            return Err(format!("sweep count must be at least 2, got {count}"));
        }
        if start > stop {
            return Err(format!("sweep start {start} exceeds stop {stop}"));
        }
        let spec = Self { variable, start, stop, count };
        if variable == SweepVar::N {
            spec.photon_numbers()?;
        }
        Ok(spec)
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.variable.column(), self.start, self.stop, self.count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_spans_endpoints() {
        let s: SweepSpec = "jc:-1:1:5".parse().unwrap();
        assert_eq!(s.variable, SweepVar::Jc);
        assert_eq!(s.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(s.to_string(), "jc:-1:1:5");
    }

    #[test]
    fn photon_grid_must_be_integral() {
        assert_eq!("n:0:3:4".parse::<SweepSpec>().unwrap().photon_numbers().unwrap(), vec![0, 1, 2, 3]);
        assert!("n:0:3:3".parse::<SweepSpec>().is_err());
        assert!("n:-1:1:3".parse::<SweepSpec>().is_err());
    }

    #[test]
    fn malformed_specs_rejected() {
        for bad in ["jc:0:1", "x:0:1:3", "jc:a:1:3", "jc:0:1:1", "jc:2:1:3", "jc:0:inf:3", "jc:0:1:-2"] {
            assert!(bad.parse::<SweepSpec>().is_err(), "{bad}");
        }
    }
}
