from coarse_menger.fixtures.decompositions import (
    HarvestFixture,
    chain_gtd,
    comb,
    grid_gtd,
    ladder,
    path_gtd,
    random_harvest_fixture,
    spider_gtd,
)
from coarse_menger.fixtures.export import fixture_doc, to_dot
from coarse_menger.fixtures.nests import Nest, RailedNest
from coarse_menger.fixtures.planting import (
    PlantedFixture,
    Site,
    extract_shaft,
    plant_terminals,
    shaft_indices,
    vortex_nest,
)
from coarse_menger.fixtures.walls import (
    Segment,
    WalloidFixture,
    gen_grid,
    gen_segment,
    gen_surface_walloid,
    gen_walloid,
)

__all__ = [
    "HarvestFixture", "Nest", "PlantedFixture", "RailedNest", "Segment", "Site", "WalloidFixture",
    "chain_gtd", "comb", "extract_shaft", "fixture_doc", "gen_grid", "gen_segment",
    "gen_surface_walloid", "gen_walloid", "grid_gtd", "ladder", "path_gtd", "plant_terminals",
    "random_harvest_fixture", "shaft_indices", "spider_gtd", "to_dot", "vortex_nest",
]
