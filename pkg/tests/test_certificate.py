from fractions import Fraction

import pytest
from sympy import primerange

from smithbar.core.errors import InputError, VacuousCertificate
from smithbar.periodic.certificate import hz_certificate, hz_scan, parse_primes

F = Fraction


def test_worked_example():
    report = hz_certificate(1, F(1, 5), 3, F(4), parse_primes('2..100'))
    assert report['min_prime_A'] == 29
    row = next(r for r in report['per_prime'] if r['p'] == 29)
    assert (row['K_lower'], row['N_lower'], row['exceeds']) == (6, 14, True)
    row = next(r for r in report['per_prime'] if r['p'] == 23)
    assert not row['exceeds']


def test_worked_example_scan():
    assert hz_scan(1, F(1, 5), 3, F(4), 200) == 29


def test_zero_length_is_vacuous():
    with pytest.raises(VacuousCertificate):
        hz_certificate(1, F(0), 3, F(4), [2, 3])


def test_smallest_listed_prime():
    assert hz_certificate(2, F(1), 1, F(1), [7, 5, 11])['min_prime_A'] == 5


def test_no_prime_large_enough():
    assert hz_certificate(1, F(1, 5), 3, F(4), [2, 3, 5])['min_prime_A'] is None


@pytest.mark.parametrize('d,betatot,n,bound', [
    (1, F(1, 5), 3, F(4)),
    (1, F(1, 7), 5, F(2)),
    (2, F(3, 10), 4, F(3)),
    (3, F(1, 50), 2, F(1)),
    (1, F(2, 3), 10, F(5, 2)),
])
def test_certificate_agrees_with_scan(d, betatot, n, bound):
    report = hz_certificate(d, betatot, n, bound, list(primerange(2, 201)))
    assert report['min_prime_A'] == hz_scan(d, betatot, n, bound, 200)


def test_parse_primes():
    assert parse_primes('2..10') == [2, 3, 5, 7]
    assert parse_primes('7, 3,3') == [3, 7]
    with pytest.raises(InputError):
        parse_primes('4,5')
    with pytest.raises(InputError):
        parse_primes('a..b')
