use cfie_bench::sphere;

#[test]
fn fixture_sizes_follow_subdivision() {
    for level in 0..=2u32 {
        let (mesh, basis) = sphere(level);
        let f = 20 * 4usize.pow(level);
        assert_eq!(mesh.num_triangles(), f);
        assert_eq!(basis.len(), 3 * f / 2);
    }
}
