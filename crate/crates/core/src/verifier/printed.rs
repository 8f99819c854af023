//! Published leading coefficients of the four expansions in `x = r²`.

use rug::Rational;

use crate::exact::NamedSeries;

const F: [&str; 6] = [
    "1/320",
    "517/201600",
    "767341/387072000",
    "4277471797/2682408960000",
    "1851483120061/1394852659200000",
    "2989339649544551/2636271525888000000",
];

const H11: [&str; 5] = [
    "79/960",
    "421/12096",
    "690961/33177600",
    "18414493/1277337600",
    "164673431213/15216574464000",
];

const H12: [&str; 5] = [
    "517/604800",
    "239497/232243200",
    "741527/709632000",
    "168874886801/167382319104000",
    "2405137262477/2510734786560000",
];

fn parse(v: &[&str]) -> Vec<Rational> {
    v.iter()
        .map(|s| s.parse().expect("valid literal"))
        .collect()
}

/// The printed coefficients of `f`, `G`, `h11` and `h12`; `None` for other series.
pub fn printed_coefficients(name: NamedSeries) -> Option<Vec<Rational>> {
    match name {
        NamedSeries::F => Some(parse(&F)),
        NamedSeries::G => {
            let mut v = vec![Rational::from((3, 4))];
            v.extend(parse(&F));
            Some(v)
        }
        NamedSeries::H11 => Some(parse(&H11)),
        NamedSeries::H12 => Some(parse(&H12)),
        _ => None,
    }
}
