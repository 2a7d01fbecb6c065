import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.cluster.hierarchy import fcluster, linkage

from maglattice import Lattice
from maglattice.lattice_support.bands import nearest_neighbours
from maglattice.lattice_support.barriers import line_bounds, transverse_basis
from maglattice.traps import Region, Tolerances, is_monotone_over_outer_half, outward_trend

from .conftest import MICRON, WELL_REGION, SyntheticField, double_well, make_site

TOLERANCES = Tolerances(grad_tol=1e-3, merge_radius=1e-8, band_z_tolerance=0.5 * MICRON, zero_field_tol=1e-9)


@pytest.fixture
def banding_lattice():
    field = SyntheticField(double_well(1e-4, 5e-5, MICRON, 2e8), WELL_REGION)
    return Lattice(field=field, tolerances=TOLERANCES, threads=1)


def test_barrier_of_double_well(well_lattice):
    left, right = well_lattice.find_minima()
    barrier = well_lattice.barrier_between(left, right)
    assert barrier.delta_b == pytest.approx(5e-5, rel=1e-8)
    np.testing.assert_allclose(barrier.saddle_position, (0.0, 0.0, 0.0), atol=1e-10)
    assert not barrier.same_site
    assert not barrier.below_site


def test_barrier_is_symmetric(well_lattice):
    left, right = well_lattice.find_minima()
    forward = well_lattice.barrier_between(left, right)
    backward = well_lattice.barrier_between(right, left)
    assert forward.delta_b == backward.delta_b
    assert forward.saddle_position == backward.saddle_position


def test_barrier_path_profile_runs_through_the_saddle(well_lattice):
    left, right = well_lattice.find_minima()
    barrier = well_lattice.barrier_between(left, right)
    assert len(barrier.path) == len(barrier.profile) == 511
    assert barrier.path[0] == 0.0
    assert barrier.path[-1] == pytest.approx(2 * MICRON, rel=1e-9)
    assert np.all(np.diff(barrier.path) > 0)
    assert max(barrier.profile) == pytest.approx(barrier.saddle_b, rel=1e-12)
    assert barrier.profile[0] == pytest.approx(left.b_min, rel=1e-12)


def test_coincident_sites_have_no_barrier(well_lattice):
    site = well_lattice.find_minima()[0]
    barrier = well_lattice.barrier_between(site, site)
    assert barrier.same_site
    assert barrier.delta_b == 0.0


def test_many_barriers_keep_their_order(well_lattice):
    left, right = well_lattice.find_minima()
    pairs = [(left, right), (right, left), (left, left)]
    threaded = Lattice(field=well_lattice.field, grid=well_lattice.grid, threads=3)
    results = threaded.barriers_between(pairs)
    assert results == [well_lattice.barrier_between(a, b) for a, b in pairs]
    assert [result.same_site for result in results] == [False, False, True]


def test_barrier_never_negative(well_lattice, caplog):
    a = make_site((-MICRON, 0.0, 0.0), b_min=1.0)
    b = make_site((MICRON, 0.0, 0.0), b_min=1.0)
    with caplog.at_level(logging.WARNING):
        barrier = well_lattice.barrier_between(a, b)
    assert barrier.delta_b == 0.0
    assert barrier.below_site
    assert 'below the higher site' in caplog.text


def test_two_height_clusters_make_two_bands(banding_lattice):
    sites = [make_site((x * MICRON, 0.0, z * MICRON)) for z in (3.0, 5.0) for x in (-1.0, 1.0)]
    bands = banding_lattice.classify_bands(sites)
    assert len(bands) == 2
    assert [band.z_centroid for band in bands] == pytest.approx([3 * MICRON, 5 * MICRON])
    assert all(site.band_index == band.index for band in bands for site in band.sites)


def test_empty_site_list_has_no_bands(banding_lattice):
    assert banding_lattice.classify_bands([]) == []
    assert banding_lattice.band_gaps([]) == []


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(min_value=0.0, max_value=10.0, allow_nan=False), min_size=2, max_size=25))
def test_bands_match_single_linkage_clustering(heights):
    field = SyntheticField(double_well(1e-4, 5e-5, MICRON, 2e8), WELL_REGION)
    lattice = Lattice(field=field, tolerances=TOLERANCES, threads=1)
    zs = [h * MICRON for h in heights]
    sites = [make_site((index * MICRON, 0.0, z)) for index, z in enumerate(zs)]
    bands = lattice.classify_bands(sites)
    found = {frozenset(round(site.x / MICRON) for site in band.sites) for band in bands}

    labels = fcluster(linkage(np.array(zs)[:, None], method='single'), t=TOLERANCES.band_z_tolerance,
                      criterion='distance')
    expected = {frozenset(i for i, label in enumerate(labels) if label == cluster) for cluster in set(labels)}
    assert found == expected


def test_layered_analysis(layered_lattice):
    analysis = layered_lattice.analyze()
    assert len(analysis.sites) == 4
    assert len(analysis.bands) == 2
    lower, upper = analysis.bands
    assert lower.z_centroid < upper.z_centroid
    assert lower.b_floor < upper.b_floor
    assert len(analysis.barriers) == 2
    for barrier in analysis.barriers:
        assert barrier.site_a.band_index == barrier.site_b.band_index
        assert barrier.delta_b > 0
    gap, = analysis.gaps
    assert (gap.lower_band, gap.upper_band) == (0, 1)
    assert gap.gap == pytest.approx(upper.b_floor - lower.b_floor)
    assert gap.gap == pytest.approx(2e-5, rel=1e-2)
    a, b = gap.vertical_pair
    assert a.x == pytest.approx(b.x, abs=1e-10)
    assert gap.vertical_barrier > 0


def test_nearest_neighbours_are_unique_pairs():
    sites = [make_site((x * MICRON, 0.0, 0.0)) for x in (0.0, 1.0, 3.0, 7.0)]
    assert nearest_neighbours(sites) == [(0, 1), (1, 2), (2, 3)]
    assert nearest_neighbours(sites[:1]) == []


def test_transverse_basis_is_orthonormal():
    direction = np.array([1.0, 2.0, -0.5])
    direction /= np.linalg.norm(direction)
    first, second = transverse_basis(direction)
    frame = np.array([direction, first, second])
    np.testing.assert_allclose(frame @ frame.T, np.eye(3), atol=1e-12)


def test_line_bounds_clip_to_region():
    region = Region(x=(-1.0, 1.0), y=(-1.0, 1.0), z=(-1.0, 1.0))
    low, high = line_bounds(np.array([0.5, 0.0, 0.0]), np.array([1.0, 0.0, 0.0]), region, -2.0, 2.0)
    assert (low, high) == pytest.approx((-1.5, 0.5))


def test_outward_trend_orders_by_distance():
    sites = [make_site((x * MICRON, 0.0, 0.0), b_min=1e-4 + abs(x) * 1e-6) for x in (3.0, -1.0, 0.0, 2.0)]
    distances, values = outward_trend(sites, 'x')
    assert list(distances) == pytest.approx([0.0, MICRON, 2 * MICRON, 3 * MICRON])
    assert is_monotone_over_outer_half(values)
    assert not is_monotone_over_outer_half([1.0, 2.0, 3.0, 2.5])
