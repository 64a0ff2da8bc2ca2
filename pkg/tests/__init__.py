"""Test suite for the levar leveled array library"""
