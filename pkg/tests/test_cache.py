from fractions import Fraction

from eisenfact.cache import DiskCache, dump_series, load_series
from eisenfact.generators import Registry, generate, parse_id


def test_round_trip():
    for name in ("eta", "G(3,1)", "f(4,0)", "E31m3", "Q3"):
        s = generate(name, 12)
        back = load_series(dump_series(parse_id(name), s), parse_id(name))
        assert back == s and back.weight == s.weight


def test_disk_cache(tmp_path):
    cache = DiskCache(tmp_path)
    reg = Registry(disk_cache=cache)
    s = reg.generate("F(2,1)", 20)
    gid = parse_id("F(2,1)")
    assert cache.path(gid).exists()
    assert cache.load(gid, 30) is None
    loaded = cache.load(gid, 10)
    assert loaded.prec == Fraction(20) and loaded == s
    again = Registry(disk_cache=cache).generate("F(2,1)", 15)
    assert again.equal_to(s)


def test_corrupt_file_ignored(tmp_path):
    cache = DiskCache(tmp_path)
    gid = parse_id("E4")
    cache.path(gid).write_text("garbage\n")
    assert cache.load(gid, 5) is None
    assert Registry(disk_cache=cache).generate("E4", 5).coefficient(1) == 240
