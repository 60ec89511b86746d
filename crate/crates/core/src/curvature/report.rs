use serde::Serialize;

use crate::complex::Complex;
use crate::scalar::{fmt_exact, Real};

use super::CurvatureField;

/// `vertex,K` rows in dense order, then `k,<value>` and `T,<value>`.
pub fn write_curvature_csv<T: Real>(c: &Complex, field: &CurvatureField<T>) -> String {
    let mut out = String::from("vertex,K\n");
    for (v, &k) in field.curvature.iter().enumerate() {
        out.push_str(&format!("{},{}\n", c.vertex_id(v), fmt_exact(k)));
    }
    out.push_str(&format!("k,{}\nT,{}\n", fmt_exact(field.average), fmt_exact(field.total)));
    out
}

#[derive(Serialize)]
struct VertexRow {
    vertex: usize,
    curvature: f64,
}

#[derive(Serialize)]
struct Report {
    vertices: Vec<VertexRow>,
    average: f64,
    total: f64,
    spread: f64,
}

/// `{"vertices":[{"vertex":id,"curvature":K},..],"average":k,"total":T,"spread":s}`
pub fn write_curvature_json<T: Real>(c: &Complex, field: &CurvatureField<T>) -> String {
    let report = Report {
        vertices: field
            .curvature
            .iter()
            .enumerate()
            .map(|(v, &k)| VertexRow { vertex: c.vertex_id(v), curvature: k.as_f64() })
            .collect(),
        average: field.average.as_f64(),
        total: field.total.as_f64(),
        spread: field.spread.as_f64(),
    };
    serde_json::to_string_pretty(&report).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::parse_facet_list;
    use crate::curvature::curvature_field;
    use crate::metric::MetricStructure;

    #[test]
    fn csv_round_trips_values() {
        let c = Complex::new(&parse_facet_list("2 4 6 8").unwrap());
        let m = MetricStructure::new(vec![1.0, 2.0, 3.0, 6.0]).unwrap();
        let f = curvature_field(&c, &m).unwrap();
        let csv = write_curvature_csv(&c, &f);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "vertex,K");
        assert!(lines[1].starts_with("2,"));
        assert!(lines[4].starts_with("8,"));
        let k: f64 = lines[5].strip_prefix("k,").unwrap().parse().unwrap();
        assert_eq!(k, f.average);
        let t: f64 = lines[6].strip_prefix("T,").unwrap().parse().unwrap();
        assert_eq!(t, f.total);
    }

    #[test]
    fn json_shape() {
        let c = Complex::new(&parse_facet_list("1 2 3 4").unwrap());
        let f = curvature_field(&c, &MetricStructure::<f64>::ones(4)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&write_curvature_json(&c, &f)).unwrap();
        assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
        assert_eq!(v["vertices"][3]["vertex"], 4);
        assert_eq!(v["total"].as_f64().unwrap(), f.total);
    }
}
